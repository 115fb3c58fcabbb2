#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace privbr {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;       // unexpected library error
inline constexpr int kExitParse = 2;       // scenario/argument problems
inline constexpr int kExitInfeasible = 3;  // alpha fails the feasibility gate
inline constexpr int kExitFail = 4;        // dynamics returned FAIL

struct RunOptions {
    std::string scenario_path;
    std::string mode = "exact"; // exact | private | noiseless-private
    std::optional<double> alpha;
    std::optional<double> epsilon;
    std::optional<double> beta;
    std::uint64_t seed = 0;
    std::optional<std::int64_t> override_total_moves;
    std::optional<std::int64_t> override_per_player_moves;
    std::string trace_out;  // CSV path; empty disables the per-turn trace
    std::string report_out; // summary JSON path; empty skips the file
    bool trace_regret = false;
    bool trace_counter_error = false;
    bool json = false; // machine-readable stdout
};
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct ParamsOptions {
    std::string scenario_path;
    std::optional<double> alpha;
    std::optional<double> epsilon;
    std::optional<double> beta;
    bool json = false;
};
int cmd_params(const ParamsOptions& options, std::ostream& out, std::ostream& err);

struct DeviateOptions {
    std::string scenario_path;
    int player = 0;
    std::string kind = "truthful"; // truthful | misreport | optout | search
    std::optional<double> alpha;
    std::optional<double> epsilon;
    std::optional<double> beta;
    std::string report_source;          // misreport
    std::string report_destination;     // misreport
    std::string optout_route;           // optout: comma-separated edge ids
    std::vector<std::string> candidates; // search: "src:dst" entries
    int trials = 100;
    std::uint64_t seed = 0;
    int parallel = 1;
    bool independent_seeds = false;
    std::string report_out;
    std::string csv_out; // per-trial costs
    bool json = false;
};
int cmd_deviate(const DeviateOptions& options, std::ostream& out, std::ostream& err);

} // namespace privbr
