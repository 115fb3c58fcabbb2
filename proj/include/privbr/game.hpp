#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace privbr {

/// Per-edge loss: maps an integer player count y in {0,...,n} to a value in
/// [0,1]. Tables are the canonical internal form; linear specs are expanded
/// (and clamped into [0,1]) when the game is validated.
class LossTable {
public:
    LossTable() = default;
    explicit LossTable(std::vector<double> values) : values_(std::move(values)) {}

    double at(int y) const { return values_[static_cast<std::size_t>(y)]; }
    int max_load() const { return static_cast<int>(values_.size()) - 1; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_; // size n+1
};

struct Edge {
    std::string id;
    int tail = 0;
    int head = 0;
    LossTable loss;
};

/// A validated routing game. Edges are stored sorted by id, so edge-index
/// order equals lexicographic edge-id order; every tie rule and summation
/// order in the library is defined in terms of that index order.
struct Game {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    int n = 0;           // player count
    int longest_path = 0; // L: longest simple path length (or declared bound)
    double delta_ell = 0.0;

    int m() const { return static_cast<int>(edges.size()); }

    // adjacency by edge index, built at validation
    std::vector<std::vector<int>> out_edges; // per tail vertex
    std::vector<std::vector<int>> in_edges;  // per head vertex

    int vertex_index(const std::string& id) const;
    int edge_index(const std::string& id) const;
};

struct PlayerType {
    int source = 0;
    int destination = 0;

    bool operator==(const PlayerType&) const = default;
};

/// A route is a simple path stored as the sequence of edge indices along it.
using Route = std::vector<int>;

/// Per-player chosen routes; edge loads are derived, never stored.
struct RouteProfile {
    std::vector<Route> routes;

    std::size_t size() const { return routes.size(); }
    bool operator==(const RouteProfile&) const = default;
};

/// Unvalidated game description as parsed from a scenario file.
struct LinearLossSpec {
    double intercept = 0.0;
    double slope = 0.0;
};
using LossSpec = std::variant<LinearLossSpec, std::vector<double>>;

struct RawEdge {
    std::string id;
    std::string tail;
    std::string head;
    LossSpec loss;
    int line = 0; // 0 when not file-backed
};

struct RawPlayer {
    std::string source;
    std::string destination;
    int line = 0;
};

struct RawGame {
    std::vector<std::string> vertices;
    std::vector<RawEdge> edges;
    std::vector<RawPlayer> players;
    std::optional<int> l_bound; // required when the graph has cycles
};

/// Validates a raw description and computes the derived quantities m, L and
/// the sensitivity. On acyclic graphs L is the exact longest-path length; on
/// cyclic graphs the declared l_bound is used (and later enforced against
/// every route the library produces).
Game validate_game(const RawGame& raw);

/// Player types of a validated raw description, as vertex indices of `game`.
std::vector<PlayerType> validate_players(const Game& game, const RawGame& raw);

/// Checks that `route` is a simple tail-to-head chain matching `type`.
bool is_valid_route(const Game& game, const PlayerType& type, const Route& route);

/// True when at least one route exists for the type (and source != dest).
bool type_feasible(const Game& game, const PlayerType& type);

/// y_e for every edge: the number of players whose route contains e.
std::vector<int> edge_loads(const Game& game, const RouteProfile& profile);

/// Cost of a route against fixed loads, summed in edge-index order.
double route_cost_at_loads(const Game& game, const Route& route,
                           const std::vector<int>& loads);

/// c(s_i, r) = sum over e in r_i of l_e(y_e). Value in [0, L].
double player_cost(const Game& game, std::size_t player, const RouteProfile& profile);

/// Rosenthal potential: Phi = sum_e sum_{i=1..y_e} l_e(i). In [0, m*n].
double potential(const Game& game, const RouteProfile& profile);
double potential_at_loads(const Game& game, const std::vector<int>& loads);

/// Sensitivity: max over edges and 0 <= y < n of |l_e(y+1) - l_e(y)|.
double sensitivity_of(const Game& game);

/// True if the directed graph has no cycle (then L is computed exactly).
bool is_acyclic(const Game& game);

} // namespace privbr
