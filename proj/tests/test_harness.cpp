#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "privbr/harness.hpp"
#include "privbr/errors.hpp"
#include "support/corpus.hpp"

using namespace privbr;
using namespace privbr::test;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Instance island_fixture() {
    RawGame raw;
    raw.vertices = {"u", "v", "w", "x"};
    raw.edges = {raw_linear_edge("e1", "u", "v", 0.1, 1e-4),
                 raw_linear_edge("e2", "u", "v", 0.6, 1e-4),
                 raw_linear_edge("e3", "w", "x", 0.5, 1e-4)};
    raw.players = {raw_player("u", "v"), raw_player("u", "v")};
    Instance inst;
    inst.game = validate_game(raw);
    inst.types = validate_players(inst.game, raw);
    return inst;
}

HarnessConfig island_config(int trials, std::uint64_t seed) {
    HarnessConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.engine.alpha = 0.4;
    cfg.engine.epsilon = 0.8;
    cfg.engine.beta = 0.05;
    return cfg;
}

// Two players parked on a shared edge with regret just below alpha: the
// learned remap then has a strictly positive, bound-respecting gain.
Instance parked_fixture() {
    RawGame raw;
    raw.vertices = {"u", "v"};
    raw.edges = {raw_edge("e1", "u", "v", {0.0, 0.4, 0.8}),
                 raw_edge("e2", "u", "v", {0.48, 0.48, 0.48})};
    raw.players = {raw_player("u", "v"), raw_player("u", "v")};
    Instance inst;
    inst.game = validate_game(raw);
    inst.types = validate_players(inst.game, raw);
    return inst;
}

} // namespace

TEST_CASE("evaluate_profile reports regrets, potential and loads") {
    Instance inst = parallel_two({0.0, 0.5, 1.0}, {0.0, 0.5, 1.0}, 2);
    RouteProfile nash;
    nash.routes = {{0}, {1}};
    const ProfileMetrics at_nash = evaluate_profile(inst.game, inst.types, nash);
    CHECK(at_nash.max_regret == 0.0);
    CHECK(at_nash.loads == std::vector<int>{1, 1});
    CHECK(at_nash.potential == doctest::Approx(1.0));

    RouteProfile lopsided;
    lopsided.routes = {{0}, {0}};
    const ProfileMetrics offside = evaluate_profile(inst.game, inst.types, lopsided);
    CHECK(offside.max_regret == doctest::Approx(0.5)); // 1.0 vs empty edge 0.5

    for (const Instance& c : make_corpus(321, 5)) {
        Rng rng(9);
        const RouteProfile p = random_profile(c.game, c.types, rng);
        const ProfileMetrics metrics = evaluate_profile(c.game, c.types, p);
        for (std::size_t i = 0; i < c.types.size(); ++i)
            CHECK(metrics.regrets[i] ==
                  doctest::Approx(brute_regret(c.game, i, p, c.types[i])).epsilon(1e-12));
    }
}

TEST_CASE("truthful self-comparison gain is exactly zero under shared seeds") {
    const Instance inst = island_fixture();
    DeviationSpec spec;
    spec.player = 0;
    spec.kind = DeviationKind::Truthful;
    const DeviationReport report =
        mediated_cost(inst.game, inst.types, spec, island_config(20, 5));
    CHECK(report.gain == 0.0);
    CHECK(report.halfwidth == 0.0);
    CHECK(report.fail_rate == 0.0);
    CHECK(report.within_bound);
    CHECK(report.mean_cost_truthful >= 0.0);
    CHECK(report.mean_cost_truthful <= inst.game.longest_path);
}

TEST_CASE("truthful self-comparison stays near zero under independent seeds") {
    const Instance inst = island_fixture();
    DeviationSpec spec;
    spec.player = 0;
    spec.kind = DeviationKind::Truthful;
    HarnessConfig cfg = island_config(16, 77);
    cfg.share_seeds = false;
    const DeviationReport report = mediated_cost(inst.game, inst.types, spec, cfg);
    CHECK(std::fabs(report.gain) <= report.halfwidth + 1e-12);
}

TEST_CASE("opting out onto a dominated route does not help") {
    const Instance inst = island_fixture();
    DeviationSpec spec;
    spec.player = 0;
    spec.kind = DeviationKind::OptOut;
    spec.optout_route = {1}; // e2: strictly dominated (0.6 vs at most 0.1002)
    const DeviationReport report =
        mediated_cost(inst.game, inst.types, spec, island_config(20, 9));
    CHECK(report.mean_cost_deviating > report.mean_cost_truthful);
    CHECK(report.gain < 0.0);
    CHECK(report.within_bound);

    DeviationSpec invalid = spec;
    invalid.optout_route = {2}; // island edge, not a route for the true type
    CHECK_THROWS_AS(mediated_cost(inst.game, inst.types, invalid, island_config(4, 1)),
                    Error);
}

TEST_CASE("misreporting the island type leaves the gain at zero") {
    const Instance inst = island_fixture();
    DeviationSpec spec;
    spec.player = 0;
    spec.kind = DeviationKind::Misreport;
    spec.reported_type = PlayerType{inst.game.vertex_index("w"), inst.game.vertex_index("x")};
    const DeviationReport report =
        mediated_cost(inst.game, inst.types, spec, island_config(30, 13));
    // fewest-edges remap plays e1, exactly the truthful outcome
    CHECK(report.gain == 0.0);
    CHECK(report.fail_rate == 0.0);
    CHECK(report.within_bound);
    CHECK(report.mean_cost_deviating <= report.eta_prime_reference +
                                            report.mean_cost_truthful);
}

TEST_CASE("failed runs are charged the loss cap L") {
    const Instance inst = island_fixture();
    DeviationSpec spec;
    spec.player = 0;
    spec.kind = DeviationKind::Truthful;
    HarnessConfig cfg = island_config(6, 3);
    cfg.engine.per_player_moves = 1; // every run fails on turn one
    const DeviationReport report = mediated_cost(inst.game, inst.types, spec, cfg);
    CHECK(report.fail_rate == 1.0);
    CHECK(report.mean_cost_truthful == static_cast<double>(inst.game.longest_path));
    CHECK(report.mean_cost_deviating == static_cast<double>(inst.game.longest_path));
    CHECK(report.gain == 0.0);
}

TEST_CASE("misreport search finds no edge on the flat island fixture") {
    const Instance inst = island_fixture();
    std::vector<PlayerType> candidates = {
        inst.types[0],
        PlayerType{inst.game.vertex_index("w"), inst.game.vertex_index("x")}};
    const MisreportSearchResult search =
        best_misreport_search(inst.game, inst.types, 0, candidates, island_config(24, 31));
    REQUIRE(search.per_candidate.size() == 2);
    for (const DeviationReport& r : search.per_candidate) {
        CHECK(std::fabs(r.gain) <= r.halfwidth + 1e-12);
        CHECK(r.within_bound);
        CHECK(r.fail_rate == 0.0);
    }
    CHECK(search.best.gain <= search.best.eta_prime_reference + 3 * search.best.halfwidth);
}

TEST_CASE("parked regret yields a strictly positive held-out gain") {
    const Instance inst = parked_fixture();
    HarnessConfig cfg;
    cfg.trials = 16;
    cfg.seed = 400;
    cfg.engine.alpha = 0.35;
    cfg.engine.epsilon = 0.99; // weak privacy
    cfg.engine.beta = 0.05;
    cfg.engine.eps_prime = kInf; // zero counter noise

    // dynamics park both players on e1 at cost 0.8 with regret 0.32 < alpha
    DeviationSpec truthful;
    truthful.player = 0;
    truthful.kind = DeviationKind::Truthful;
    const DeviationReport base = mediated_cost(inst.game, inst.types, truthful, cfg);
    CHECK(base.mean_cost_truthful == doctest::Approx(0.8));

    const MisreportSearchResult search =
        best_misreport_search(inst.game, inst.types, 0, {inst.types[0]}, cfg);
    CHECK(search.best.gain == doctest::Approx(0.32)); // 0.8 -> 0.48 via remap
    CHECK(search.best.gain > 0.0);
    CHECK(search.best.within_bound); // far below eta' ~ 2.4
}

TEST_CASE("report means stay within [0, L] across the corpus") {
    const Instance inst = island_fixture();
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        DeviationSpec spec;
        spec.player = 1;
        spec.kind = DeviationKind::Truthful;
        const DeviationReport r =
            mediated_cost(inst.game, inst.types, spec, island_config(8, seed));
        CHECK(r.mean_cost_truthful >= 0.0);
        CHECK(r.mean_cost_truthful <= inst.game.longest_path);
        CHECK(r.mean_cost_deviating >= 0.0);
        CHECK(r.mean_cost_deviating <= inst.game.longest_path);
        CHECK(r.per_trial.size() == 8);
    }
}

TEST_CASE("parallel trials reproduce the single-threaded aggregate") {
    const Instance inst = island_fixture();
    DeviationSpec spec;
    spec.player = 0;
    spec.kind = DeviationKind::OptOut;
    spec.optout_route = {1};
    HarnessConfig serial = island_config(12, 2026);
    HarnessConfig threaded = serial;
    threaded.parallel = 4;
    const DeviationReport a = mediated_cost(inst.game, inst.types, spec, serial);
    const DeviationReport b = mediated_cost(inst.game, inst.types, spec, threaded);
    CHECK(a.gain == b.gain);
    CHECK(a.mean_cost_truthful == b.mean_cost_truthful);
    CHECK(a.mean_cost_deviating == b.mean_cost_deviating);
    CHECK(a.halfwidth == b.halfwidth);
    for (std::size_t t = 0; t < a.per_trial.size(); ++t) {
        CHECK(a.per_trial[t].truthful == b.per_trial[t].truthful);
        CHECK(a.per_trial[t].deviating == b.per_trial[t].deviating);
    }
}
