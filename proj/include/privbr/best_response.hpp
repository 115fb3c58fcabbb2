#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "privbr/game.hpp"

namespace privbr {

/// Outcome of an alpha-threshold best-response query. `route` is empty when
/// no candidate improves the player's cost by at least alpha (the NA case).
/// When a route is returned, improvement = old_cost - new_cost >= alpha.
struct BestResponseResult {
    std::optional<Route> route;
    double old_cost = 0.0;
    double new_cost = 0.0;
    double improvement = 0.0;

    bool moved() const { return route.has_value(); }
};

/// Noisy per-edge loads as published by the private counters. Values are
/// real-valued; they are clamped into [0,n] and rounded half-up before a
/// loss table is consulted.
using NoisyLoads = std::vector<double>;

/// Minimum-cost route for player i against the other players' fixed routes.
/// Candidate edge e is weighted l_e(y_e - [e in r_i] + 1), i.e. the count i
/// would see after moving there. Among cost minimizers the lexicographically
/// smallest edge sequence is returned.
Route exact_best_route(const Game& game, std::size_t player, const RouteProfile& profile,
                       const std::vector<PlayerType>& types);

/// Exact alpha-best response: the best route if it improves by >= alpha
/// (inclusive), otherwise NA.
BestResponseResult alpha_best_response(const Game& game, std::size_t player,
                                       const RouteProfile& profile,
                                       const std::vector<PlayerType>& types, double alpha);

/// Noisy alpha-best response against published counts y_hat. A candidate
/// route evaluates edge e at y_hat_e + 1 when e is newly joined and at
/// y_hat_e when e is already on the current route; counts are clamped into
/// [0,n] and rounded half-up before the loss lookup. With y_hat equal to the
/// exact loads this coincides with alpha_best_response.
BestResponseResult noisy_alpha_best_response(const Game& game, std::size_t player,
                                             const Route& current_route,
                                             const PlayerType& type,
                                             const NoisyLoads& noisy_loads, double alpha);

/// Exact regret: current cost minus the best achievable cost against the
/// others' fixed routes. Zero when the current route is optimal.
double regret(const Game& game, std::size_t player, const RouteProfile& profile,
              const std::vector<PlayerType>& types);

/// All simple source->destination paths in deterministic (lexicographic)
/// order. Throws `route-explosion` when more than `cap` paths exist and
/// `l-bound-violated` if some path exceeds the game's declared L.
std::vector<Route> enumerate_routes(const Game& game, const PlayerType& type,
                                    std::size_t cap = 100000);

/// Effective integer load for a noisy count: clamp into [0,n], round half-up.
int effective_load(double noisy_count, int n);

namespace detail {
/// Lexicographically smallest route minimizing the sum of fixed nonnegative
/// per-edge weights. Shared by the exact and noisy oracles.
Route min_weight_route(const Game& game, const PlayerType& type,
                       const std::vector<double>& weights);
} // namespace detail

} // namespace privbr
