#include "privbr/game.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "privbr/errors.hpp"

namespace privbr {

int Game::vertex_index(const std::string& id) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == id) return static_cast<int>(i);
    return -1;
}

int Game::edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].id == id) return static_cast<int>(i);
    return -1;
}

namespace {

LossTable expand_loss(const LossSpec& spec, int n, const std::string& edge_id) {
    std::vector<double> values;
    if (const auto* lin = std::get_if<LinearLossSpec>(&spec)) {
        values.resize(static_cast<std::size_t>(n) + 1);
        for (int y = 0; y <= n; ++y) {
            double v = lin->intercept + lin->slope * static_cast<double>(y);
            values[static_cast<std::size_t>(y)] = std::min(1.0, std::max(0.0, v));
        }
    } else {
        values = std::get<std::vector<double>>(spec);
        if (static_cast<int>(values.size()) != n + 1)
            fail("loss-out-of-range",
                 "edge '" + edge_id + "': table must have n+1 = " + std::to_string(n + 1) +
                     " entries, got " + std::to_string(values.size()));
        for (double v : values)
            if (!(v >= 0.0 && v <= 1.0))
                fail("loss-out-of-range",
                     "edge '" + edge_id + "': loss value " + std::to_string(v) +
                         " outside [0,1]");
    }
    return LossTable(std::move(values));
}

// Longest path (edge count) in a DAG via DP over a topological order.
// Returns -1 if the graph has a cycle.
int longest_path_or_cycle(const Game& game) {
    const int nv = static_cast<int>(game.vertices.size());
    std::vector<int> indegree(nv, 0);
    for (const Edge& e : game.edges) indegree[static_cast<std::size_t>(e.head)]++;

    std::deque<int> ready;
    for (int v = 0; v < nv; ++v)
        if (indegree[static_cast<std::size_t>(v)] == 0) ready.push_back(v);

    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(nv));
    std::vector<int> indeg = indegree;
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (int ei : game.out_edges[static_cast<std::size_t>(v)]) {
            int h = game.edges[static_cast<std::size_t>(ei)].head;
            if (--indeg[static_cast<std::size_t>(h)] == 0) ready.push_back(h);
        }
    }
    if (static_cast<int>(order.size()) != nv) return -1; // cycle

    std::vector<int> best(static_cast<std::size_t>(nv), 0); // longest path ending at v
    int longest = 0;
    for (int v : order) {
        for (int ei : game.out_edges[static_cast<std::size_t>(v)]) {
            int h = game.edges[static_cast<std::size_t>(ei)].head;
            int cand = best[static_cast<std::size_t>(v)] + 1;
            if (cand > best[static_cast<std::size_t>(h)]) best[static_cast<std::size_t>(h)] = cand;
        }
        longest = std::max(longest, best[static_cast<std::size_t>(v)]);
    }
    return longest;
}

bool reachable(const Game& game, int from, int to) {
    if (from == to) return true;
    std::vector<char> seen(game.vertices.size(), 0);
    std::deque<int> queue{from};
    seen[static_cast<std::size_t>(from)] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int ei : game.out_edges[static_cast<std::size_t>(v)]) {
            int h = game.edges[static_cast<std::size_t>(ei)].head;
            if (h == to) return true;
            if (!seen[static_cast<std::size_t>(h)]) {
                seen[static_cast<std::size_t>(h)] = 1;
                queue.push_back(h);
            }
        }
    }
    return false;
}

} // namespace

Game validate_game(const RawGame& raw) {
    Game game;
    if (raw.vertices.empty()) fail("parse", "game has no vertices");
    if (raw.edges.empty()) fail("parse", "game has no edges");
    if (raw.players.empty()) fail("parse", "game has no players");

    game.vertices = raw.vertices;
    std::sort(game.vertices.begin(), game.vertices.end());
    game.vertices.erase(std::unique(game.vertices.begin(), game.vertices.end()),
                        game.vertices.end());
    std::unordered_map<std::string, int> vindex;
    for (std::size_t i = 0; i < game.vertices.size(); ++i)
        vindex[game.vertices[i]] = static_cast<int>(i);

    game.n = static_cast<int>(raw.players.size());

    // Sort edges by id so index order is lexicographic id order.
    std::vector<RawEdge> raw_edges = raw.edges;
    std::sort(raw_edges.begin(), raw_edges.end(),
              [](const RawEdge& a, const RawEdge& b) { return a.id < b.id; });
    for (std::size_t i = 0; i + 1 < raw_edges.size(); ++i)
        if (raw_edges[i].id == raw_edges[i + 1].id)
            fail("duplicate-edge-id", "edge id '" + raw_edges[i].id + "' appears twice");

    for (const RawEdge& re : raw_edges) {
        auto t = vindex.find(re.tail);
        auto h = vindex.find(re.head);
        if (t == vindex.end())
            fail("dangling-endpoint",
                 "edge '" + re.id + "' references unknown vertex '" + re.tail + "'");
        if (h == vindex.end())
            fail("dangling-endpoint",
                 "edge '" + re.id + "' references unknown vertex '" + re.head + "'");
        Edge e;
        e.id = re.id;
        e.tail = t->second;
        e.head = h->second;
        e.loss = expand_loss(re.loss, game.n, re.id);
        game.edges.push_back(std::move(e));
    }

    game.out_edges.assign(game.vertices.size(), {});
    game.in_edges.assign(game.vertices.size(), {});
    for (std::size_t ei = 0; ei < game.edges.size(); ++ei) {
        game.out_edges[static_cast<std::size_t>(game.edges[ei].tail)].push_back(
            static_cast<int>(ei));
        game.in_edges[static_cast<std::size_t>(game.edges[ei].head)].push_back(
            static_cast<int>(ei));
    }

    const int exact_longest = longest_path_or_cycle(game);
    if (exact_longest >= 0) {
        game.longest_path = std::max(1, exact_longest);
    } else {
        if (!raw.l_bound)
            fail("bad-l-bound", "graph has a cycle; an explicit L_bound is required");
        if (*raw.l_bound < 1 || *raw.l_bound > game.m())
            fail("bad-l-bound", "L_bound must lie in [1, m]");
        game.longest_path = *raw.l_bound;
    }

    // Player feasibility: a path exists iff the destination is reachable.
    for (const RawPlayer& p : raw.players) {
        auto s = vindex.find(p.source);
        auto d = vindex.find(p.destination);
        if (s == vindex.end() || d == vindex.end())
            fail("no-feasible-path", "player (" + p.source + " -> " + p.destination +
                                         ") references an unknown vertex");
        if (s->second == d->second)
            fail("no-feasible-path", "player (" + p.source + " -> " + p.destination +
                                         ") has identical source and destination");
        if (!reachable(game, s->second, d->second))
            fail("no-feasible-path",
                 "no path from '" + p.source + "' to '" + p.destination + "'");
    }

    game.delta_ell = sensitivity_of(game);
    return game;
}

std::vector<PlayerType> validate_players(const Game& game, const RawGame& raw) {
    std::vector<PlayerType> types;
    types.reserve(raw.players.size());
    for (const RawPlayer& p : raw.players) {
        PlayerType t;
        t.source = game.vertex_index(p.source);
        t.destination = game.vertex_index(p.destination);
        types.push_back(t);
    }
    return types;
}

bool type_feasible(const Game& game, const PlayerType& type) {
    if (type.source < 0 || type.destination < 0 ||
        type.source >= static_cast<int>(game.vertices.size()) ||
        type.destination >= static_cast<int>(game.vertices.size()))
        return false;
    return type.source != type.destination &&
           reachable(game, type.source, type.destination);
}

bool is_valid_route(const Game& game, const PlayerType& type, const Route& route) {
    if (route.empty()) return false;
    std::vector<char> seen(game.vertices.size(), 0);
    int at = type.source;
    seen[static_cast<std::size_t>(at)] = 1;
    for (int ei : route) {
        if (ei < 0 || ei >= game.m()) return false;
        const Edge& e = game.edges[static_cast<std::size_t>(ei)];
        if (e.tail != at) return false;
        if (seen[static_cast<std::size_t>(e.head)]) return false; // not simple
        seen[static_cast<std::size_t>(e.head)] = 1;
        at = e.head;
    }
    return at == type.destination;
}

std::vector<int> edge_loads(const Game& game, const RouteProfile& profile) {
    std::vector<int> loads(static_cast<std::size_t>(game.m()), 0);
    for (const Route& r : profile.routes)
        for (int ei : r) loads[static_cast<std::size_t>(ei)]++;
    return loads;
}

double route_cost_at_loads(const Game& game, const Route& route,
                           const std::vector<int>& loads) {
    // Fixed summation order (ascending edge index) for reproducibility.
    Route sorted = route;
    std::sort(sorted.begin(), sorted.end());
    double cost = 0.0;
    for (int ei : sorted)
        cost += game.edges[static_cast<std::size_t>(ei)].loss.at(
            loads[static_cast<std::size_t>(ei)]);
    return cost;
}

double player_cost(const Game& game, std::size_t player, const RouteProfile& profile) {
    const std::vector<int> loads = edge_loads(game, profile);
    return route_cost_at_loads(game, profile.routes[player], loads);
}

double potential_at_loads(const Game& game, const std::vector<int>& loads) {
    double phi = 0.0;
    for (int ei = 0; ei < game.m(); ++ei) {
        const LossTable& loss = game.edges[static_cast<std::size_t>(ei)].loss;
        const int y = loads[static_cast<std::size_t>(ei)];
        for (int i = 1; i <= y; ++i) phi += loss.at(i);
    }
    return phi;
}

double potential(const Game& game, const RouteProfile& profile) {
    return potential_at_loads(game, edge_loads(game, profile));
}

double sensitivity_of(const Game& game) {
    double worst = 0.0;
    for (const Edge& e : game.edges)
        for (int y = 0; y < game.n; ++y)
            worst = std::max(worst, std::fabs(e.loss.at(y + 1) - e.loss.at(y)));
    return worst;
}

bool is_acyclic(const Game& game) { return longest_path_or_cycle(game) >= 0; }

} // namespace privbr
