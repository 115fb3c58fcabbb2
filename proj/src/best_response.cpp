#include "privbr/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "privbr/errors.hpp"

namespace privbr {

int effective_load(double noisy_count, int n) {
    double clamped = std::min(static_cast<double>(n), std::max(0.0, noisy_count));
    return static_cast<int>(std::floor(clamped + 0.5)); // round half up
}

namespace detail {

Route min_weight_route(const Game& game, const PlayerType& type,
                       const std::vector<double>& weights) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const std::size_t nv = game.vertices.size();

    // Reverse Dijkstra: rdist[v] = min weight of a v -> destination path.
    std::vector<double> rdist(nv, kInf);
    std::vector<char> done(nv, 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    rdist[static_cast<std::size_t>(type.destination)] = 0.0;
    queue.emplace(0.0, type.destination);
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (done[static_cast<std::size_t>(v)]) continue;
        done[static_cast<std::size_t>(v)] = 1;
        for (int ei : game.in_edges[static_cast<std::size_t>(v)]) {
            const Edge& e = game.edges[static_cast<std::size_t>(ei)];
            const double cand = weights[static_cast<std::size_t>(ei)] + d;
            if (cand < rdist[static_cast<std::size_t>(e.tail)]) {
                rdist[static_cast<std::size_t>(e.tail)] = cand;
                queue.emplace(cand, e.tail);
            }
        }
    }
    if (rdist[static_cast<std::size_t>(type.source)] == kInf)
        fail("no-feasible-path", "destination unreachable in best-response search");

    // Walk tight edges (w + rdist[head] == rdist[tail], exact double equality)
    // depth-first in ascending edge-index order; the first complete simple
    // path is the lexicographically smallest minimizer.
    Route path;
    std::vector<char> on_path(nv, 0);
    std::function<bool(int)> dfs = [&](int v) -> bool {
        if (v == type.destination) return true;
        on_path[static_cast<std::size_t>(v)] = 1;
        for (int ei : game.out_edges[static_cast<std::size_t>(v)]) {
            const Edge& e = game.edges[static_cast<std::size_t>(ei)];
            if (on_path[static_cast<std::size_t>(e.head)]) continue;
            if (rdist[static_cast<std::size_t>(e.head)] == kInf) continue;
            if (weights[static_cast<std::size_t>(ei)] +
                    rdist[static_cast<std::size_t>(e.head)] !=
                rdist[static_cast<std::size_t>(v)])
                continue;
            path.push_back(ei);
            if (dfs(e.head)) return true;
            path.pop_back();
        }
        on_path[static_cast<std::size_t>(v)] = 0;
        return false;
    };
    if (!dfs(type.source))
        fail("no-feasible-path", "tight-edge search found no path"); // unreachable
    if (static_cast<int>(path.size()) > game.longest_path)
        fail("l-bound-violated", "best-response route longer than declared L");
    return path;
}

namespace {

double canonical_route_weight(const Route& route, const std::vector<double>& weights) {
    Route sorted = route;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (int ei : sorted) sum += weights[static_cast<std::size_t>(ei)];
    return sum;
}

BestResponseResult respond_with_weights(const Game& game, const Route& current,
                                        const PlayerType& type,
                                        const std::vector<double>& weights, double alpha) {
    BestResponseResult result;
    result.old_cost = canonical_route_weight(current, weights);
    Route best = min_weight_route(game, type, weights);
    result.new_cost = canonical_route_weight(best, weights);
    result.improvement = result.old_cost - result.new_cost;
    if (result.improvement >= alpha) result.route = std::move(best);
    return result;
}

} // namespace
} // namespace detail

namespace {

std::vector<double> exact_weights(const Game& game, const Route& current,
                                  const std::vector<int>& loads) {
    std::vector<char> on_route(static_cast<std::size_t>(game.m()), 0);
    for (int ei : current) on_route[static_cast<std::size_t>(ei)] = 1;
    std::vector<double> weights(static_cast<std::size_t>(game.m()));
    for (int ei = 0; ei < game.m(); ++ei) {
        const int count = loads[static_cast<std::size_t>(ei)] -
                          (on_route[static_cast<std::size_t>(ei)] ? 1 : 0) + 1;
        weights[static_cast<std::size_t>(ei)] =
            game.edges[static_cast<std::size_t>(ei)].loss.at(count);
    }
    return weights;
}

std::vector<double> noisy_weights(const Game& game, const Route& current,
                                  const NoisyLoads& noisy_loads) {
    std::vector<char> on_route(static_cast<std::size_t>(game.m()), 0);
    for (int ei : current) on_route[static_cast<std::size_t>(ei)] = 1;
    std::vector<double> weights(static_cast<std::size_t>(game.m()));
    for (int ei = 0; ei < game.m(); ++ei) {
        const double adjusted = noisy_loads[static_cast<std::size_t>(ei)] +
                                (on_route[static_cast<std::size_t>(ei)] ? 0.0 : 1.0);
        weights[static_cast<std::size_t>(ei)] =
            game.edges[static_cast<std::size_t>(ei)].loss.at(
                effective_load(adjusted, game.n));
    }
    return weights;
}

} // namespace

Route exact_best_route(const Game& game, std::size_t player, const RouteProfile& profile,
                       const std::vector<PlayerType>& types) {
    const std::vector<int> loads = edge_loads(game, profile);
    return detail::min_weight_route(game, types[player],
                                    exact_weights(game, profile.routes[player], loads));
}

BestResponseResult alpha_best_response(const Game& game, std::size_t player,
                                       const RouteProfile& profile,
                                       const std::vector<PlayerType>& types, double alpha) {
    if (!(alpha > 0.0)) fail("bad-argument", "alpha must be positive");
    const std::vector<int> loads = edge_loads(game, profile);
    return detail::respond_with_weights(
        game, profile.routes[player], types[player],
        exact_weights(game, profile.routes[player], loads), alpha);
}

BestResponseResult noisy_alpha_best_response(const Game& game, std::size_t player,
                                             const Route& current_route,
                                             const PlayerType& type,
                                             const NoisyLoads& noisy_loads, double alpha) {
    (void)player;
    if (!(alpha > 0.0)) fail("bad-argument", "alpha must be positive");
    return detail::respond_with_weights(game, current_route, type,
                                        noisy_weights(game, current_route, noisy_loads),
                                        alpha);
}

double regret(const Game& game, std::size_t player, const RouteProfile& profile,
              const std::vector<PlayerType>& types) {
    const std::vector<int> loads = edge_loads(game, profile);
    const std::vector<double> weights = exact_weights(game, profile.routes[player], loads);
    const double old_cost = detail::canonical_route_weight(profile.routes[player], weights);
    const Route best = detail::min_weight_route(game, types[player], weights);
    return old_cost - detail::canonical_route_weight(best, weights);
}

std::vector<Route> enumerate_routes(const Game& game, const PlayerType& type,
                                    std::size_t cap) {
    std::vector<Route> routes;
    Route path;
    std::vector<char> on_path(game.vertices.size(), 0);
    std::function<void(int)> dfs = [&](int v) {
        if (v == type.destination) {
            if (routes.size() >= cap)
                fail("route-explosion", "more than " + std::to_string(cap) +
                                            " simple paths; raise the cap");
            if (static_cast<int>(path.size()) > game.longest_path)
                fail("l-bound-violated",
                     "enumerated route longer than declared L bound");
            routes.push_back(path);
            return;
        }
        on_path[static_cast<std::size_t>(v)] = 1;
        for (int ei : game.out_edges[static_cast<std::size_t>(v)]) {
            const Edge& e = game.edges[static_cast<std::size_t>(ei)];
            if (on_path[static_cast<std::size_t>(e.head)]) continue;
            path.push_back(ei);
            dfs(e.head);
            path.pop_back();
        }
        on_path[static_cast<std::size_t>(v)] = 0;
    };
    dfs(type.source);
    return routes;
}

} // namespace privbr
