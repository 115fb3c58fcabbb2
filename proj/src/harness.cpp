#include "privbr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "privbr/best_response.hpp"
#include "privbr/errors.hpp"
#include "privbr/rng.hpp"

namespace privbr {

namespace {

constexpr std::uint64_t kIndependentArmSpace = 1ULL << 32;

/// Runs fn(0..count-1), each index exactly once; results must be written to
/// per-index slots so the reduction order stays fixed.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct TrialOutcome {
    bool failed = false;
    RouteProfile suggestions; // participant-indexed
};

TrialOutcome run_mediator(const Game& game, const std::vector<PlayerType>& reported,
                          const PrivateEngineConfig& engine, std::uint64_t seed) {
    PrivateEngineConfig cfg = engine;
    cfg.seed = seed;
    cfg.trace = TraceOptions{};
    RunOutcome out = run_br_private(game, reported, cfg);
    TrialOutcome trial;
    trial.failed = !out.converged();
    trial.suggestions = std::move(out.final_profile);
    return trial;
}

Route fewest_edges_route(const Game& game, const PlayerType& type) {
    return initial_profile(game, {type}).routes[0];
}

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double paired_halfwidth(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n < 2) return 0.0;
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];
    const double mu = mean_of(diff);
    double ss = 0.0;
    for (double d : diff) ss += (d - mu) * (d - mu);
    const double var = ss / static_cast<double>(n - 1);
    return 1.96 * std::sqrt(var / static_cast<double>(n));
}

double independent_halfwidth(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    if (n < 2) return 0.0;
    auto var_of = [](const std::vector<double>& xs) {
        const double mu = mean_of(xs);
        double ss = 0.0;
        for (double x : xs) ss += (x - mu) * (x - mu);
        return ss / static_cast<double>(xs.size() - 1);
    };
    return 1.96 * std::sqrt((var_of(a) + var_of(b)) / static_cast<double>(n));
}

} // namespace

ProfileMetrics evaluate_profile(const Game& game, const std::vector<PlayerType>& types,
                                const RouteProfile& profile) {
    ProfileMetrics metrics;
    metrics.loads = edge_loads(game, profile);
    metrics.potential = potential_at_loads(game, metrics.loads);
    metrics.regrets.reserve(types.size());
    for (std::size_t i = 0; i < types.size(); ++i)
        metrics.regrets.push_back(regret(game, i, profile, types));
    metrics.max_regret = 0.0;
    for (double r : metrics.regrets) metrics.max_regret = std::max(metrics.max_regret, r);
    return metrics;
}

DeviationReport mediated_cost(const Game& game, const std::vector<PlayerType>& types,
                              const DeviationSpec& spec, const HarnessConfig& config) {
    if (config.trials < 1) fail("bad-argument", "trials must be >= 1");
    if (spec.player >= types.size()) fail("bad-argument", "player index out of range");
    if (spec.kind == DeviationKind::OptOut) {
        if (types.size() < 2) fail("bad-argument", "opt-out needs at least 2 players");
        if (!is_valid_route(game, types[spec.player], spec.optout_route))
            fail("bad-argument", "opt-out route is not a valid route for the true type");
    }

    const std::size_t i = spec.player;
    const double loss_cap = static_cast<double>(game.longest_path);
    const int trials = config.trials;

    std::vector<PlayerType> reported = types;
    std::vector<PlayerType> participants = types; // opt-out: everyone else
    if (spec.kind == DeviationKind::Misreport) reported[i] = spec.reported_type;
    if (spec.kind == DeviationKind::OptOut)
        participants.erase(participants.begin() + static_cast<std::ptrdiff_t>(i));

    const Route fallback = fewest_edges_route(game, types[i]);
    auto remap = [&](const Route& suggested) -> Route {
        if (spec.remap == RemapPolicy::Table) {
            auto it = spec.remap_table.find(suggested);
            if (it != spec.remap_table.end()) return it->second;
        }
        return fallback;
    };

    std::vector<TrialCost> costs(static_cast<std::size_t>(trials));
    const bool deviating_same_run =
        spec.kind == DeviationKind::Truthful && config.share_seeds;

    parallel_for(trials, config.parallel, [&](int t) {
        const auto tu = static_cast<std::uint64_t>(t);
        const std::uint64_t seed_truthful = derive_seed(config.seed, tu);
        const std::uint64_t seed_deviating =
            config.share_seeds ? seed_truthful
                               : derive_seed(config.seed, kIndependentArmSpace | tu);
        TrialCost& slot = costs[static_cast<std::size_t>(t)];

        const TrialOutcome truthful =
            run_mediator(game, types, config.engine, seed_truthful);
        slot.truthful_failed = truthful.failed;
        slot.truthful = truthful.failed
                            ? loss_cap
                            : player_cost(game, i, truthful.suggestions);

        if (deviating_same_run) {
            slot.deviating = slot.truthful;
            slot.deviating_failed = slot.truthful_failed;
            return;
        }

        TrialOutcome dev;
        RouteProfile realized;
        switch (spec.kind) {
            case DeviationKind::Truthful:
                dev = run_mediator(game, types, config.engine, seed_deviating);
                realized = dev.suggestions;
                break;
            case DeviationKind::Misreport:
                dev = run_mediator(game, reported, config.engine, seed_deviating);
                realized = dev.suggestions;
                if (!dev.failed) realized.routes[i] = remap(dev.suggestions.routes[i]);
                break;
            case DeviationKind::OptOut:
                dev = run_mediator(game, participants, config.engine, seed_deviating);
                if (!dev.failed) {
                    realized.routes = dev.suggestions.routes;
                    realized.routes.insert(
                        realized.routes.begin() + static_cast<std::ptrdiff_t>(i),
                        spec.optout_route);
                }
                break;
        }
        slot.deviating_failed = dev.failed;
        slot.deviating = dev.failed ? loss_cap : player_cost(game, i, realized);
    });

    std::vector<double> truthful_costs, deviating_costs;
    truthful_costs.reserve(costs.size());
    deviating_costs.reserve(costs.size());
    int failures = 0;
    for (const TrialCost& c : costs) {
        truthful_costs.push_back(c.truthful);
        deviating_costs.push_back(c.deviating);
        failures += c.truthful_failed ? 1 : 0;
        if (!deviating_same_run) failures += c.deviating_failed ? 1 : 0;
    }
    const int executed = deviating_same_run ? trials : 2 * trials;

    DeviationReport report;
    report.player = i;
    report.kind = spec.kind;
    report.trials = trials;
    report.mean_cost_truthful = mean_of(truthful_costs);
    report.mean_cost_deviating = mean_of(deviating_costs);
    report.gain = report.mean_cost_truthful - report.mean_cost_deviating;
    report.halfwidth = config.share_seeds
                           ? paired_halfwidth(truthful_costs, deviating_costs)
                           : independent_halfwidth(truthful_costs, deviating_costs);
    report.fail_rate = static_cast<double>(failures) / static_cast<double>(executed);
    const Params params = effective_private_params(
        game,
        static_cast<int>(spec.kind == DeviationKind::OptOut ? participants.size()
                                                            : types.size()),
        config.engine);
    report.eta_prime_reference = params.eta_prime;
    report.within_bound = report.gain <= report.eta_prime_reference + 3.0 * report.halfwidth;
    if (spec.kind == DeviationKind::Misreport) report.reported_type = spec.reported_type;
    report.per_trial = std::move(costs);
    return report;
}

MisreportSearchResult best_misreport_search(const Game& game,
                                            const std::vector<PlayerType>& types,
                                            std::size_t player,
                                            const std::vector<PlayerType>& candidate_types,
                                            const HarnessConfig& config) {
    if (candidate_types.empty()) fail("bad-argument", "candidate type list is empty");
    if (player >= types.size()) fail("bad-argument", "player index out of range");
    if (config.trials < 4) fail("bad-argument", "search needs at least 4 trials");

    const std::size_t i = player;
    const double loss_cap = static_cast<double>(game.longest_path);
    const int trials = config.trials;
    const int train_end = trials / 2;
    const std::vector<Route> true_routes =
        enumerate_routes(game, types[i], config.enumeration_cap);
    const Route fallback = fewest_edges_route(game, types[i]);

    // Truthful arm, one run per trial, shared across all candidates.
    std::vector<TrialOutcome> truthful(static_cast<std::size_t>(trials));
    parallel_for(trials, config.parallel, [&](int t) {
        truthful[static_cast<std::size_t>(t)] = run_mediator(
            game, types, config.engine,
            derive_seed(config.seed, static_cast<std::uint64_t>(t)));
    });
    std::vector<double> truthful_cost(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        const TrialOutcome& out = truthful[static_cast<std::size_t>(t)];
        truthful_cost[static_cast<std::size_t>(t)] =
            out.failed ? loss_cap : player_cost(game, i, out.suggestions);
    }

    MisreportSearchResult result;
    for (const PlayerType& candidate : candidate_types) {
        std::vector<PlayerType> reported = types;
        reported[i] = candidate;

        std::vector<TrialOutcome> runs(static_cast<std::size_t>(trials));
        parallel_for(trials, config.parallel, [&](int t) {
            runs[static_cast<std::size_t>(t)] = run_mediator(
                game, reported, config.engine,
                derive_seed(config.seed, static_cast<std::uint64_t>(t)));
        });

        // Train: per observed suggestion, the true route with the smallest
        // conditional mean cost against the realized opponents.
        auto cost_with_route = [&](const TrialOutcome& out, const Route& r) {
            RouteProfile realized = out.suggestions;
            realized.routes[i] = r;
            return player_cost(game, i, realized);
        };
        std::map<Route, Route> remap;
        std::map<Route, std::vector<int>> by_suggestion;
        for (int t = 0; t < train_end; ++t) {
            const TrialOutcome& out = runs[static_cast<std::size_t>(t)];
            if (!out.failed) by_suggestion[out.suggestions.routes[i]].push_back(t);
        }
        for (const auto& [suggestion, trial_ids] : by_suggestion) {
            Route best = fallback;
            double best_mean = std::numeric_limits<double>::infinity();
            for (const Route& r : true_routes) {
                double sum = 0.0;
                for (int t : trial_ids)
                    sum += cost_with_route(runs[static_cast<std::size_t>(t)], r);
                const double mean = sum / static_cast<double>(trial_ids.size());
                if (mean < best_mean) {
                    best_mean = mean;
                    best = r;
                }
            }
            remap[suggestion] = best;
        }

        // Held-out evaluation.
        std::vector<double> eval_truthful, eval_deviating;
        int failures = 0;
        for (int t = 0; t < trials; ++t)
            failures += (runs[static_cast<std::size_t>(t)].failed ? 1 : 0) +
                        (truthful[static_cast<std::size_t>(t)].failed ? 1 : 0);
        for (int t = train_end; t < trials; ++t) {
            const TrialOutcome& out = runs[static_cast<std::size_t>(t)];
            double dev_cost = loss_cap;
            if (!out.failed) {
                auto it = remap.find(out.suggestions.routes[i]);
                dev_cost = cost_with_route(out, it == remap.end() ? fallback : it->second);
            }
            eval_deviating.push_back(dev_cost);
            eval_truthful.push_back(truthful_cost[static_cast<std::size_t>(t)]);
        }

        DeviationReport report;
        report.player = i;
        report.kind = DeviationKind::Misreport;
        report.reported_type = candidate;
        report.trials = static_cast<int>(eval_truthful.size());
        report.mean_cost_truthful = mean_of(eval_truthful);
        report.mean_cost_deviating = mean_of(eval_deviating);
        report.gain = report.mean_cost_truthful - report.mean_cost_deviating;
        report.halfwidth = paired_halfwidth(eval_truthful, eval_deviating);
        report.fail_rate =
            static_cast<double>(failures) / static_cast<double>(2 * trials);
        const Params params =
            effective_private_params(game, static_cast<int>(types.size()), config.engine);
        report.eta_prime_reference = params.eta_prime;
        report.within_bound =
            report.gain <= report.eta_prime_reference + 3.0 * report.halfwidth;
        result.per_candidate.push_back(std::move(report));
    }

    result.best = result.per_candidate.front();
    for (const DeviationReport& r : result.per_candidate)
        if (r.gain > result.best.gain) result.best = r;
    return result;
}

} // namespace privbr
