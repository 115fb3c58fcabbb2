#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "privbr/dynamics.hpp"
#include "privbr/game.hpp"

namespace privbr {

/// Per-player equilibrium-quality metrics of a profile.
struct ProfileMetrics {
    std::vector<double> regrets;
    double max_regret = 0.0;
    double potential = 0.0;
    std::vector<int> loads;
};
ProfileMetrics evaluate_profile(const Game& game, const std::vector<PlayerType>& types,
                                const RouteProfile& profile);

enum class DeviationKind { Truthful, Misreport, OptOut };

/// How a misreporting player turns the suggestion for the reported type into
/// a route of her true type. FewestEdges plays the constant fewest-edge true
/// route; Table looks the suggestion up (falling back to FewestEdges).
enum class RemapPolicy { FewestEdges, Table };

struct DeviationSpec {
    std::size_t player = 0;
    DeviationKind kind = DeviationKind::Truthful;
    PlayerType reported_type;                // Misreport
    RemapPolicy remap = RemapPolicy::FewestEdges;
    std::map<Route, Route> remap_table;      // Misreport + Table
    Route optout_route;                      // OptOut: constant route played
};

struct HarnessConfig {
    int trials = 100;
    std::uint64_t seed = 0;
    /// Both arms of a trial share the per-trial sub-seed (common random
    /// numbers; a truthful self-comparison is then exactly zero). Set false
    /// for fully independent arms.
    bool share_seeds = true;
    int parallel = 1;
    /// alpha/epsilon/beta and any engine overrides; the per-run seed is
    /// derived per trial and ignores engine.seed.
    PrivateEngineConfig engine;
    std::size_t enumeration_cap = 100000;
};

struct TrialCost {
    double truthful = 0.0;
    double deviating = 0.0;
    bool truthful_failed = false;
    bool deviating_failed = false;
};

/// Monte-Carlo estimate of the mediated-game cost difference between
/// truthful play and one deviation. gain > 0 means the deviation helped.
struct DeviationReport {
    std::size_t player = 0;
    DeviationKind kind = DeviationKind::Truthful;
    int trials = 0;                 // trials that entered the estimates
    double mean_cost_truthful = 0.0;
    double mean_cost_deviating = 0.0;
    double gain = 0.0;              // truthful - deviating
    double halfwidth = 0.0;         // 1.96 * se of the gain estimate
    double fail_rate = 0.0;         // failed runs / executed runs
    double eta_prime_reference = 0.0;
    bool within_bound = false;      // gain <= eta' + 3*halfwidth
    std::optional<PlayerType> reported_type;
    std::vector<TrialCost> per_trial;
};

/// Runs the mediator on the (possibly misreported) type profile `trials`
/// times. Player `spec.player` realizes her action per the deviation kind;
/// everyone else follows their suggestion. Failed mediator runs are scored
/// as cost L for every player.
DeviationReport mediated_cost(const Game& game, const std::vector<PlayerType>& types,
                              const DeviationSpec& spec, const HarnessConfig& config);

/// For each candidate reported type, learns an empirically optimal
/// suggestion->route remap on the first half of the trials and honestly
/// evaluates it on the held-out second half; returns the candidate with the
/// largest held-out gain. Gains in these reports are over the held-out half.
struct MisreportSearchResult {
    DeviationReport best;
    std::vector<DeviationReport> per_candidate;
};
MisreportSearchResult best_misreport_search(const Game& game,
                                            const std::vector<PlayerType>& types,
                                            std::size_t player,
                                            const std::vector<PlayerType>& candidate_types,
                                            const HarnessConfig& config);

} // namespace privbr
