#pragma once

#include <optional>
#include <string>
#include <vector>

#include "privbr/game.hpp"

namespace privbr {

/// A parsed and validated scenario file: the game, the player types, and
/// optional default parameters.
struct Scenario {
    std::string name;
    std::string description;
    RawGame raw;
    Game game;
    std::vector<PlayerType> types;
    std::optional<double> alpha;
    std::optional<double> epsilon;
    std::optional<double> beta;
};

/// Parses the line-oriented scenario format (see README for the grammar).
/// Errors carry `parse` codes with line diagnostics; semantic problems are
/// delegated to validate_game.
Scenario parse_scenario_text(const std::string& text, const std::string& origin);
Scenario parse_scenario_file(const std::string& path);

/// Canonical text form; parse(format(s)) == s for the structured content.
std::string format_scenario(const Scenario& scenario);

} // namespace privbr
