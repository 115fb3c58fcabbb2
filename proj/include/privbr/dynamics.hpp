#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "privbr/game.hpp"
#include "privbr/params.hpp"

namespace privbr {

/// What to record per turn. Move events and per-player move counts are
/// always kept; per-turn records are opt-in because a full trace is
/// O(m * n * T) memory at worst.
struct TraceOptions {
    bool per_turn = false;
    bool record_potential = false;
    bool record_mover_regret = false;
    bool record_counter_error = false;
    bool record_loads = false;
};

struct TraceRecord {
    std::int64_t turn = 0;
    int mover = 0;
    bool moved = false;
    double potential = 0.0;          // NaN when not recorded
    double mover_regret = 0.0;       // exact regret after the turn; NaN when off
    double max_counter_error = 0.0;  // max_e |y_hat - y|; NaN when off/exact
    std::vector<int> loads;                 // record_loads only
    std::vector<std::int64_t> counter_exact; // record_loads only, private engine
};

struct MoveEvent {
    std::int64_t turn = 0;
    int player = 0;
    Route from;
    Route to;

    bool operator==(const MoveEvent&) const = default;
};

struct FailInfo {
    int player = 0;
    std::int64_t turn = 0;
};

/// Effective schedule a run actually used (after defaults and overrides).
struct EffectiveConfig {
    double alpha = 0.0;
    std::int64_t total_moves = 0;      // T
    std::int64_t per_player_moves = 0; // k
    double eps_prime = 0.0;            // +inf means noiseless
    std::uint64_t seed = 0;
};

struct RunOutcome {
    enum class Status { Converged, Fail };

    Status status = Status::Converged;
    RouteProfile final_profile;
    /// count(i) in the pseudocode sense: starts at 1 (the initial placement
    /// is charged) and increments on every accepted move. Fail fires the
    /// turn some mover's count reaches k.
    std::vector<std::int64_t> move_counts;
    std::vector<MoveEvent> moves;
    std::optional<FailInfo> fail;
    double max_counter_error_seen = 0.0; // private engine only
    EffectiveConfig config;
    std::optional<Params> params; // private engine: full derived parameter set
    std::vector<TraceRecord> trace;

    bool converged() const { return status == Status::Converged; }
};

struct ExactEngineConfig {
    double alpha = 0.0;
    std::optional<std::int64_t> total_moves;      // default ceil(mn/alpha)
    std::optional<std::int64_t> per_player_moves; // default max(2, ceil(4Lmn*dl/a^2))
    TraceOptions trace;
};

struct PrivateEngineConfig {
    double alpha = 0.0;
    double epsilon = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    /// Surgical overrides; anything not set derives from the formulas
    /// (and eps' is recalibrated against the effective T and k).
    std::optional<std::int64_t> total_moves;
    std::optional<std::int64_t> per_player_moves;
    std::optional<double> eps_prime; // +inf gives the zero-noise mode
    TraceOptions trace;
};

/// Fewest-edge route per player, ties to the lexicographically smallest
/// edge sequence. The move counters of a run start at 1 on top of this.
RouteProfile initial_profile(const Game& game, const std::vector<PlayerType>& types);

/// Swaps player i onto new_route and returns the per-edge stream symbols:
/// -1 for edges left, +1 for edges joined, 0 otherwise.
std::vector<int> apply_move(const Game& game, RouteProfile& profile, std::size_t player,
                            const Route& new_route);

/// Best-response dynamics with exact edge counts: n*T round-robin turns,
/// each mover playing an alpha-best response when one exists. Fails when a
/// move counter reaches k.
RunOutcome run_br_exact(const Game& game, const std::vector<PlayerType>& types,
                        const ExactEngineConfig& config);

/// Best-response dynamics against binary-mechanism counters, one per edge,
/// budgeted for n*(T+1) symbols and calibrated at eps' = eps/(4kL ln T).
/// The initial placement feeds the first n stream entries; each of the n*T
/// turns then uses the previous turn's noisy counts and feeds one symbol to
/// every counter. Throws `infeasible-alpha` unless alpha > 4*Delta_T(beta).
RunOutcome run_br_private(const Game& game, const std::vector<PlayerType>& types,
                          const PrivateEngineConfig& config);

/// Effective parameter set a private run would use for `participants`
/// players under `config` (overrides applied, eps' recalibrated). Does not
/// gate on feasibility, so inspection commands can render infeasible tables.
Params effective_private_params(const Game& game, int participants,
                                const PrivateEngineConfig& config);

} // namespace privbr
