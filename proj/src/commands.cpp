#include "privbr/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "privbr/best_response.hpp"
#include "privbr/errors.hpp"
#include "privbr/harness.hpp"
#include "privbr/scenario.hpp"

namespace privbr {

namespace {

using Json = nlohmann::ordered_json;
constexpr int kSchemaVersion = 1;

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

Json json_number_or_infinite(double v) {
    if (std::isinf(v)) return "infinite";
    return v;
}

Json params_to_json(const Params& p) {
    Json j;
    j["n"] = p.n;
    j["m"] = p.m;
    j["L"] = p.longest_path;
    j["delta_ell"] = p.delta_ell;
    j["alpha"] = p.alpha;
    j["epsilon"] = p.epsilon;
    j["beta"] = p.beta;
    j["T"] = p.total_moves;
    j["k"] = p.per_player_moves;
    j["eps_prime"] = json_number_or_infinite(p.eps_prime);
    j["count_error_bound"] = p.count_error;
    j["cost_error_bound"] = p.cost_error;
    j["feasible"] = p.feasible;
    j["eta"] = p.eta;
    j["eta_prime"] = p.eta_prime;
    j["eta_order"] = p.eta_order;
    j["epsilon_order"] = p.epsilon_order;
    j["beta_order"] = p.beta_order;
    return j;
}

Json route_to_json(const Game& game, const Route& route) {
    Json j = Json::array();
    for (int ei : route) j.push_back(game.edges[static_cast<std::size_t>(ei)].id);
    return j;
}

Route route_from_ids(const Game& game, const std::string& comma_separated) {
    Route route;
    std::istringstream in(comma_separated);
    std::string id;
    while (std::getline(in, id, ',')) {
        if (id.empty()) continue;
        const int ei = game.edge_index(id);
        if (ei < 0) fail("bad-argument", "unknown edge id '" + id + "'");
        route.push_back(ei);
    }
    if (route.empty()) fail("bad-argument", "route is empty");
    return route;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("bad-argument", "cannot write '" + path + "'");
    out << content;
}

int map_error_exit(const Error& e) {
    if (e.code() == "infeasible-alpha") return kExitInfeasible;
    if (e.code() == "parse" || e.code() == "bad-argument" ||
        e.code() == "dangling-endpoint" || e.code() == "duplicate-edge-id" ||
        e.code() == "loss-out-of-range" || e.code() == "no-feasible-path" ||
        e.code() == "bad-l-bound")
        return kExitParse;
    return kExitError;
}

struct ResolvedRunParams {
    double alpha;
    double epsilon;
    double beta;
};

ResolvedRunParams resolve_run_params(const Scenario& scenario,
                                     const std::optional<double>& alpha,
                                     const std::optional<double>& epsilon,
                                     const std::optional<double>& beta,
                                     bool need_privacy) {
    ResolvedRunParams r{0.0, 0.0, 0.0};
    if (alpha) r.alpha = *alpha;
    else if (scenario.alpha) r.alpha = *scenario.alpha;
    else fail("bad-argument", "alpha missing (set it in [defaults] or pass --alpha)");
    if (need_privacy) {
        if (epsilon) r.epsilon = *epsilon;
        else if (scenario.epsilon) r.epsilon = *scenario.epsilon;
        else fail("bad-argument", "epsilon missing (set it in [defaults] or pass --epsilon)");
        if (beta) r.beta = *beta;
        else if (scenario.beta) r.beta = *scenario.beta;
        else fail("bad-argument", "beta missing (set it in [defaults] or pass --beta)");
    }
    return r;
}

std::string trace_csv(const RunOutcome& outcome) {
    std::ostringstream out;
    out << "t,mover,moved,potential,mover_regret_exact,max_counter_error\n";
    for (const TraceRecord& rec : outcome.trace) {
        out << rec.turn << ',' << rec.mover << ',' << (rec.moved ? 1 : 0) << ',';
        if (!std::isnan(rec.potential)) out << fmt(rec.potential);
        out << ',';
        if (!std::isnan(rec.mover_regret)) out << fmt(rec.mover_regret);
        out << ',';
        if (!std::isnan(rec.max_counter_error)) out << fmt(rec.max_counter_error);
        out << '\n';
    }
    return out.str();
}

Json outcome_to_json(const Scenario& scenario, const RunOutcome& outcome,
                     const std::string& mode, const ProfileMetrics& metrics) {
    const Game& game = scenario.game;
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "run";
    j["scenario"] = scenario.name;
    j["mode"] = mode;
    j["seed"] = outcome.config.seed;
    j["status"] = outcome.converged() ? "converged" : "fail";
    Json cfg;
    cfg["alpha"] = outcome.config.alpha;
    cfg["T"] = outcome.config.total_moves;
    cfg["k"] = outcome.config.per_player_moves;
    cfg["eps_prime"] = json_number_or_infinite(outcome.config.eps_prime);
    j["config"] = cfg;
    if (outcome.params) j["params"] = params_to_json(*outcome.params);
    if (outcome.fail) {
        Json f;
        f["player"] = outcome.fail->player;
        f["turn"] = outcome.fail->turn;
        j["fail"] = f;
    }
    j["move_counts"] = outcome.move_counts;
    j["accepted_moves"] = outcome.moves.size();
    Json profile = Json::array();
    for (const Route& r : outcome.final_profile.routes)
        profile.push_back(route_to_json(game, r));
    j["final_profile"] = profile;
    j["final_regrets"] = metrics.regrets;
    j["max_regret"] = metrics.max_regret;
    j["potential"] = metrics.potential;
    j["max_counter_error_seen"] = outcome.max_counter_error_seen;
    return j;
}

} // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const Scenario scenario = parse_scenario_file(options.scenario_path);
        const bool is_private =
            options.mode == "private" || options.mode == "noiseless-private";
        if (!is_private && options.mode != "exact")
            fail("bad-argument", "mode must be exact, private or noiseless-private");
        const ResolvedRunParams run_params = resolve_run_params(
            scenario, options.alpha, options.epsilon, options.beta, is_private);

        TraceOptions trace;
        if (!options.trace_out.empty()) {
            trace.per_turn = true;
            trace.record_potential = true;
            trace.record_mover_regret = options.trace_regret;
            trace.record_counter_error = options.trace_counter_error && is_private;
        }

        RunOutcome outcome;
        if (is_private) {
            PrivateEngineConfig cfg;
            cfg.alpha = run_params.alpha;
            cfg.epsilon = run_params.epsilon;
            cfg.beta = run_params.beta;
            cfg.seed = options.seed;
            cfg.total_moves = options.override_total_moves;
            cfg.per_player_moves = options.override_per_player_moves;
            if (options.mode == "noiseless-private")
                cfg.eps_prime = std::numeric_limits<double>::infinity();
            cfg.trace = trace;
            outcome = run_br_private(scenario.game, scenario.types, cfg);
        } else {
            ExactEngineConfig cfg;
            cfg.alpha = run_params.alpha;
            cfg.total_moves = options.override_total_moves;
            cfg.per_player_moves = options.override_per_player_moves;
            cfg.trace = trace;
            outcome = run_br_exact(scenario.game, scenario.types, cfg);
        }

        const ProfileMetrics metrics =
            evaluate_profile(scenario.game, scenario.types, outcome.final_profile);
        const Json summary = outcome_to_json(scenario, outcome, options.mode, metrics);

        if (!options.trace_out.empty()) write_file(options.trace_out, trace_csv(outcome));
        if (!options.report_out.empty())
            write_file(options.report_out, summary.dump(2) + "\n");

        if (options.json) {
            out << summary.dump(2) << "\n";
        } else {
            out << "scenario   " << scenario.name << "\n";
            out << "mode       " << options.mode << "\n";
            out << "status     " << (outcome.converged() ? "converged" : "FAIL") << "\n";
            out << "alpha      " << fmt(outcome.config.alpha) << "\n";
            out << "T          " << outcome.config.total_moves << "\n";
            out << "k          " << outcome.config.per_player_moves << "\n";
            if (std::isinf(outcome.config.eps_prime))
                out << "eps'       infinite (no noise)\n";
            else
                out << "eps'       " << fmt(outcome.config.eps_prime) << "\n";
            out << "moves      " << outcome.moves.size() << "\n";
            out << "max_regret " << fmt(metrics.max_regret) << "\n";
            out << "potential  " << fmt(metrics.potential) << "\n";
            if (outcome.fail)
                out << "breach     player " << outcome.fail->player << " at turn "
                    << outcome.fail->turn << "\n";
        }
        return outcome.converged() ? kExitOk : kExitFail;
    } catch (const Error& e) {
        err << "error (" << e.code() << "): " << e.what() << "\n";
        return map_error_exit(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_params(const ParamsOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const Scenario scenario = parse_scenario_file(options.scenario_path);
        const ResolvedRunParams run_params = resolve_run_params(
            scenario, options.alpha, options.epsilon, options.beta, true);
        PrivateEngineConfig cfg;
        cfg.alpha = run_params.alpha;
        cfg.epsilon = run_params.epsilon;
        cfg.beta = run_params.beta;
        const Params params = effective_private_params(
            scenario.game, static_cast<int>(scenario.types.size()), cfg);
        const ExactParams exact =
            exact_params(static_cast<int>(scenario.types.size()), scenario.game.m(),
                         scenario.game.longest_path, scenario.game.delta_ell,
                         run_params.alpha);

        Json j = params_to_json(params);
        j["T_exact"] = exact.total_moves;
        j["k_exact_lemma"] = exact.per_player_lemma;
        j["k_exact_alg"] = exact.per_player_alg;
        Json wrapped;
        wrapped["schema_version"] = kSchemaVersion;
        wrapped["command"] = "params";
        wrapped["scenario"] = scenario.name;
        wrapped["params"] = j;

        if (options.json) {
            out << wrapped.dump(2) << "\n";
        } else {
            for (const auto& [key, value] : j.items()) {
                std::string rendered;
                if (value.is_number_float()) rendered = fmt(value.get<double>());
                else rendered = value.dump();
                out << key << " " << rendered << "\n";
            }
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error (" << e.code() << "): " << e.what() << "\n";
        return map_error_exit(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

namespace {

Json report_to_json(const Scenario& scenario, const DeviationReport& report,
                    const std::string& kind) {
    const Game& game = scenario.game;
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "deviate";
    j["scenario"] = scenario.name;
    j["kind"] = kind;
    j["player"] = report.player;
    if (report.reported_type) {
        j["reported_source"] =
            game.vertices[static_cast<std::size_t>(report.reported_type->source)];
        j["reported_destination"] =
            game.vertices[static_cast<std::size_t>(report.reported_type->destination)];
    }
    j["trials"] = report.trials;
    j["mean_cost_truthful"] = report.mean_cost_truthful;
    j["mean_cost_deviating"] = report.mean_cost_deviating;
    j["gain"] = report.gain;
    j["halfwidth"] = report.halfwidth;
    j["fail_rate"] = report.fail_rate;
    j["eta_prime_reference"] = report.eta_prime_reference;
    j["verdict"] = report.within_bound ? "within-bound" : "flagged";
    return j;
}

std::string per_trial_csv(const DeviationReport& report) {
    std::ostringstream out;
    out << "trial,cost_truthful,cost_deviating,truthful_failed,deviating_failed\n";
    for (std::size_t t = 0; t < report.per_trial.size(); ++t) {
        const TrialCost& c = report.per_trial[t];
        out << t << ',' << fmt(c.truthful) << ',' << fmt(c.deviating) << ','
            << (c.truthful_failed ? 1 : 0) << ',' << (c.deviating_failed ? 1 : 0) << '\n';
    }
    return out.str();
}

PlayerType type_from_names(const Game& game, const std::string& source,
                           const std::string& destination) {
    PlayerType t;
    t.source = game.vertex_index(source);
    t.destination = game.vertex_index(destination);
    if (t.source < 0) fail("bad-argument", "unknown vertex '" + source + "'");
    if (t.destination < 0) fail("bad-argument", "unknown vertex '" + destination + "'");
    return t;
}

} // namespace

int cmd_deviate(const DeviateOptions& options, std::ostream& out, std::ostream& err) {
    try {
        const Scenario scenario = parse_scenario_file(options.scenario_path);
        const Game& game = scenario.game;
        if (options.player < 0 ||
            options.player >= static_cast<int>(scenario.types.size()))
            fail("bad-argument", "player index out of range");
        const ResolvedRunParams run_params = resolve_run_params(
            scenario, options.alpha, options.epsilon, options.beta, true);

        HarnessConfig config;
        config.trials = options.trials;
        config.seed = options.seed;
        config.share_seeds = !options.independent_seeds;
        config.parallel = options.parallel;
        config.engine.alpha = run_params.alpha;
        config.engine.epsilon = run_params.epsilon;
        config.engine.beta = run_params.beta;

        DeviationReport report;
        if (options.kind == "search") {
            std::vector<PlayerType> candidates;
            if (options.candidates.empty()) {
                for (const PlayerType& t : scenario.types) {
                    bool seen = false;
                    for (const PlayerType& c : candidates) seen = seen || c == t;
                    if (!seen) candidates.push_back(t);
                }
            } else {
                for (const std::string& spec : options.candidates) {
                    const std::size_t colon = spec.find(':');
                    if (colon == std::string::npos)
                        fail("bad-argument", "candidate must be 'source:destination'");
                    candidates.push_back(type_from_names(game, spec.substr(0, colon),
                                                         spec.substr(colon + 1)));
                }
            }
            const MisreportSearchResult search = best_misreport_search(
                game, scenario.types, static_cast<std::size_t>(options.player),
                candidates, config);
            report = search.best;
        } else {
            DeviationSpec spec;
            spec.player = static_cast<std::size_t>(options.player);
            if (options.kind == "truthful") {
                spec.kind = DeviationKind::Truthful;
            } else if (options.kind == "misreport") {
                spec.kind = DeviationKind::Misreport;
                if (options.report_source.empty() || options.report_destination.empty())
                    fail("bad-argument",
                         "misreport needs --report-source and --report-destination");
                spec.reported_type = type_from_names(game, options.report_source,
                                                     options.report_destination);
                if (!type_feasible(game, spec.reported_type))
                    fail("bad-argument", "reported type has no feasible route");
            } else if (options.kind == "optout") {
                spec.kind = DeviationKind::OptOut;
                if (options.optout_route.empty())
                    fail("bad-argument", "optout needs --route e1,e2,...");
                spec.optout_route = route_from_ids(game, options.optout_route);
            } else {
                fail("bad-argument",
                     "kind must be truthful, misreport, optout or search");
            }
            report = mediated_cost(game, scenario.types, spec, config);
        }

        const Json j = report_to_json(scenario, report, options.kind);
        if (!options.report_out.empty()) write_file(options.report_out, j.dump(2) + "\n");
        if (!options.csv_out.empty() && !report.per_trial.empty())
            write_file(options.csv_out, per_trial_csv(report));

        if (options.json) {
            out << j.dump(2) << "\n";
        } else {
            out << "kind       " << options.kind << "\n";
            out << "player     " << report.player << "\n";
            out << "trials     " << report.trials << "\n";
            out << "truthful   " << fmt(report.mean_cost_truthful) << "\n";
            out << "deviating  " << fmt(report.mean_cost_deviating) << "\n";
            out << "gain       " << fmt(report.gain) << "\n";
            out << "halfwidth  " << fmt(report.halfwidth) << "\n";
            out << "fail_rate  " << fmt(report.fail_rate) << "\n";
            out << "eta_prime  " << fmt(report.eta_prime_reference) << "\n";
            out << "verdict    " << (report.within_bound ? "within-bound" : "flagged")
                << "\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error (" << e.code() << "): " << e.what() << "\n";
        return map_error_exit(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

} // namespace privbr
