#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "privbr/errors.hpp"
#include "privbr/game.hpp"
#include "support/corpus.hpp"

using namespace privbr;
using namespace privbr::test;

namespace {

RawGame line_graph_raw(int players) {
    RawGame raw;
    raw.vertices = {"u", "v", "w", "x"};
    raw.edges = {raw_edge("e1", "u", "v", std::vector<double>(players + 1, 0.1)),
                 raw_edge("e2", "v", "w", std::vector<double>(players + 1, 0.1)),
                 raw_edge("e3", "w", "x", std::vector<double>(players + 1, 0.1))};
    for (int i = 0; i < players; ++i) raw.players.push_back(raw_player("u", "x"));
    return raw;
}

} // namespace

TEST_CASE("validate_game derives m, L and sensitivity") {
    Instance inst = parallel_two({0.0, 0.3, 0.6}, {0.0, 0.2, 0.4}, 2);
    CHECK(inst.game.m() == 2);
    CHECK(inst.game.longest_path == 1);
    CHECK(inst.game.n == 2);
    CHECK(inst.game.delta_ell == doctest::Approx(0.3));

    const Game line = validate_game(line_graph_raw(1));
    CHECK(line.longest_path == 3);
}

TEST_CASE("validate_game rejects bad inputs") {
    RawGame raw = line_graph_raw(1);
    raw.edges.push_back(raw_edge("e9", "u", "nowhere", {0.0, 0.0}));
    CHECK_THROWS_WITH_AS(validate_game(raw), doctest::Contains("nowhere"), Error);

    RawGame dup = line_graph_raw(1);
    dup.edges.push_back(raw_edge("e1", "u", "v", {0.0, 0.0}));
    CHECK_THROWS_AS(validate_game(dup), Error);

    RawGame bad_loss = line_graph_raw(1);
    bad_loss.edges[0] = raw_edge("e1", "u", "v", {0.0, 1.5});
    try {
        validate_game(bad_loss);
        FAIL("expected loss-out-of-range");
    } catch (const Error& e) {
        CHECK(e.code() == "loss-out-of-range");
    }

    RawGame short_table = line_graph_raw(2); // tables need n+1 = 3 entries
    short_table.edges[0] = raw_edge("e1", "u", "v", {0.0, 0.1});
    CHECK_THROWS_AS(validate_game(short_table), Error);

    RawGame no_path = line_graph_raw(2);
    no_path.players = {raw_player("u", "x"), raw_player("x", "u")};
    try {
        validate_game(no_path);
        FAIL("expected no-feasible-path");
    } catch (const Error& e) {
        CHECK(e.code() == "no-feasible-path");
    }
}

TEST_CASE("cyclic graphs need a declared L bound") {
    RawGame raw;
    raw.vertices = {"u", "v"};
    raw.edges = {raw_edge("e1", "u", "v", {0.1, 0.1}),
                 raw_edge("e2", "v", "u", {0.1, 0.1})};
    raw.players = {raw_player("u", "v")};
    try {
        validate_game(raw);
        FAIL("expected bad-l-bound");
    } catch (const Error& e) {
        CHECK(e.code() == "bad-l-bound");
    }
    raw.l_bound = 2;
    const Game game = validate_game(raw);
    CHECK(game.longest_path == 2);
    CHECK_FALSE(is_acyclic(game));
}

TEST_CASE("linear losses are expanded and clamped before sensitivity") {
    RawGame raw;
    raw.vertices = {"u", "v"};
    raw.edges = {raw_linear_edge("e1", "u", "v", 0.8, 0.3)};
    raw.players = {raw_player("u", "v"), raw_player("u", "v")};
    const Game game = validate_game(raw);
    CHECK(game.edges[0].loss.at(0) == doctest::Approx(0.8));
    CHECK(game.edges[0].loss.at(1) == 1.0); // clamped
    CHECK(game.edges[0].loss.at(2) == 1.0);
    // increments after clamping: |1.0-0.8| = 0.2, |1.0-1.0| = 0
    CHECK(game.delta_ell == doctest::Approx(0.2));
}

TEST_CASE("edge_loads counts route membership") {
    Instance inst = parallel_two({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, 2);
    RouteProfile both;
    both.routes = {{0}, {0}};
    CHECK(edge_loads(inst.game, both) == std::vector<int>{2, 0});

    RouteProfile split;
    split.routes = {{0}, {1}};
    CHECK(edge_loads(inst.game, split) == std::vector<int>{1, 1});

    RouteProfile empty;
    CHECK(edge_loads(inst.game, empty) == std::vector<int>{0, 0});
}

TEST_CASE("player_cost matches the loss at the realized load") {
    // single player on an edge with l(y) = y/4
    Instance inst = parallel_two({0.0, 0.25, 0.5, 0.75, 1.0},
                                 {0.0, 0.0, 0.0, 0.0, 0.0}, 4);
    RouteProfile profile;
    profile.routes = {{0}, {1}, {1}, {1}};
    CHECK(player_cost(inst.game, 0, profile) == doctest::Approx(0.25));
    CHECK(player_cost(inst.game, 1, profile) == 0.0); // all-zero losses

    Instance shared = parallel_two({0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}, 2);
    RouteProfile both;
    both.routes = {{0}, {0}};
    CHECK(player_cost(shared.game, 0, both) == doctest::Approx(1.0));
    CHECK(player_cost(shared.game, 1, both) == doctest::Approx(1.0));
}

TEST_CASE("potential sums loss prefixes per edge") {
    Instance inst = parallel_two({0.0, 0.25, 0.5, 0.75}, {0.0, 0.0, 0.0, 0.0}, 3);
    RouteProfile empty;
    empty.routes = {};
    CHECK(potential(inst.game, empty) == 0.0);

    RouteProfile all;
    all.routes = {{0}, {0}, {0}};
    CHECK(potential(inst.game, all) == doctest::Approx(1.5)); // (1+2+3)/4
}

TEST_CASE("potential identity over randomized unilateral deviations") {
    const auto corpus = make_corpus(20260810, 8);
    REQUIRE(corpus.size() >= 6);
    int deviations = 0;
    for (const Instance& inst : corpus) {
        Rng rng(derive_seed(99, deviations));
        for (int rep = 0; rep < 5; ++rep) {
            RouteProfile profile = random_profile(inst.game, inst.types, rng);
            for (std::size_t i = 0; i < inst.types.size(); ++i) {
                const double cost_now = player_cost(inst.game, i, profile);
                const double phi_now = potential(inst.game, profile);
                for (const Route& alt : enumerate_routes(inst.game, inst.types[i])) {
                    RouteProfile changed = profile;
                    changed.routes[i] = alt;
                    const double delta_cost =
                        cost_now - player_cost(inst.game, i, changed);
                    const double delta_phi = phi_now - potential(inst.game, changed);
                    CHECK(std::fabs(delta_cost - delta_phi) <= 1e-12);
                    ++deviations;
                }
            }
        }
    }
    CHECK(deviations > 100);
}

TEST_CASE("cost, load and potential bounds hold on the corpus") {
    for (const Instance& inst : make_corpus(77, 6)) {
        Rng rng(inst.game.n);
        const RouteProfile profile = random_profile(inst.game, inst.types, rng);
        const auto loads = edge_loads(inst.game, profile);
        for (int y : loads) {
            CHECK(y >= 0);
            CHECK(y <= inst.game.n);
        }
        for (std::size_t i = 0; i < inst.types.size(); ++i) {
            const double c = player_cost(inst.game, i, profile);
            CHECK(c >= 0.0);
            CHECK(c <= inst.game.longest_path);
        }
        const double phi = potential(inst.game, profile);
        CHECK(phi >= 0.0);
        CHECK(phi <= static_cast<double>(inst.game.m()) * inst.game.n);
    }
}

TEST_CASE("edge_loads is permutation invariant in player order") {
    Instance inst = parallel_two({0.0, 0.1, 0.2, 0.3}, {0.0, 0.1, 0.2, 0.3}, 3);
    RouteProfile profile;
    profile.routes = {{0}, {1}, {0}};
    RouteProfile permuted;
    permuted.routes = {{1}, {0}, {0}};
    CHECK(edge_loads(inst.game, profile) == edge_loads(inst.game, permuted));
}

TEST_CASE("sensitivity scans all edges and loads") {
    // linear l(y) = y/n has constant increments 1/n
    RawGame raw;
    raw.vertices = {"u", "v"};
    raw.edges = {raw_linear_edge("e1", "u", "v", 0.0, 0.25)};
    raw.players = {raw_player("u", "v"), raw_player("u", "v"),
                   raw_player("u", "v"), raw_player("u", "v")};
    CHECK(validate_game(raw).delta_ell == doctest::Approx(0.25));

    raw.edges = {raw_edge("e1", "u", "v", {0.3, 0.3, 0.3, 0.3, 0.3})};
    CHECK(validate_game(raw).delta_ell == 0.0);

    // independent re-scan oracle on random tables
    for (const Instance& inst : make_corpus(4242, 5)) {
        double expected = 0.0;
        for (const Edge& e : inst.game.edges)
            for (int y = 0; y + 1 <= inst.game.n; ++y)
                expected = std::max(expected,
                                    std::fabs(e.loss.at(y + 1) - e.loss.at(y)));
        CHECK(sensitivity_of(inst.game) == expected);
    }
}

TEST_CASE("route validity checks shape and simplicity") {
    const Game line = validate_game(line_graph_raw(1));
    PlayerType type{line.vertex_index("u"), line.vertex_index("x")};
    CHECK(is_valid_route(line, type, {0, 1, 2}));
    CHECK_FALSE(is_valid_route(line, type, {0, 1}));  // stops early
    CHECK_FALSE(is_valid_route(line, type, {1, 2}));  // wrong start
    CHECK_FALSE(is_valid_route(line, type, {}));
    CHECK(type_feasible(line, type));
    CHECK_FALSE(type_feasible(line, PlayerType{line.vertex_index("x"),
                                               line.vertex_index("u")}));
}
