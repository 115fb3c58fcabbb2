#include <iostream>

#include <CLI11.hpp>

#include "privbr/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Private best-response dynamics for routing games"};
    app.require_subcommand(1);

    privbr::RunOptions run_options;
    CLI::App* run = app.add_subcommand("run", "Run best-response dynamics on a scenario");
    run->add_option("scenario", run_options.scenario_path, "scenario file")->required();
    run->add_option("--mode", run_options.mode,
                    "exact | private | noiseless-private (default exact)");
    run->add_option("--alpha", run_options.alpha, "improvement threshold");
    run->add_option("--epsilon", run_options.epsilon, "privacy parameter epsilon");
    run->add_option("--beta", run_options.beta, "failure probability beta");
    run->add_option("--seed", run_options.seed, "master seed (default 0)");
    run->add_option("--override-T", run_options.override_total_moves,
                    "override the derived total move budget T");
    run->add_option("--override-k", run_options.override_per_player_moves,
                    "override the derived per-player move budget k");
    run->add_option("--trace-out", run_options.trace_out, "write per-turn trace CSV");
    run->add_option("--report-out", run_options.report_out, "write summary JSON");
    run->add_flag("--trace-regret", run_options.trace_regret,
                  "include the mover's exact regret in the trace");
    run->add_flag("--trace-error", run_options.trace_counter_error,
                  "include the max counter error in the trace");
    run->add_flag("--json", run_options.json, "machine-readable stdout");

    privbr::ParamsOptions params_options;
    CLI::App* params = app.add_subcommand("params", "Print the derived parameter table");
    params->add_option("scenario", params_options.scenario_path, "scenario file")->required();
    params->add_option("--alpha", params_options.alpha, "improvement threshold");
    params->add_option("--epsilon", params_options.epsilon, "privacy parameter epsilon");
    params->add_option("--beta", params_options.beta, "failure probability beta");
    params->add_flag("--json", params_options.json, "machine-readable stdout");

    privbr::DeviateOptions deviate_options;
    CLI::App* deviate =
        app.add_subcommand("deviate", "Monte-Carlo deviation experiment in the mediated game");
    deviate->add_option("scenario", deviate_options.scenario_path, "scenario file")->required();
    deviate->add_option("--player", deviate_options.player, "deviating player index (0-based)")
        ->required();
    deviate->add_option("--kind", deviate_options.kind,
                        "truthful | misreport | optout | search (default truthful)");
    deviate->add_option("--alpha", deviate_options.alpha, "improvement threshold");
    deviate->add_option("--epsilon", deviate_options.epsilon, "privacy parameter epsilon");
    deviate->add_option("--beta", deviate_options.beta, "failure probability beta");
    deviate->add_option("--report-source", deviate_options.report_source,
                        "misreported source vertex");
    deviate->add_option("--report-destination", deviate_options.report_destination,
                        "misreported destination vertex");
    deviate->add_option("--route", deviate_options.optout_route,
                        "opt-out route as comma-separated edge ids");
    deviate->add_option("--candidate", deviate_options.candidates,
                        "search candidate 'source:destination' (repeatable)");
    deviate->add_option("--trials", deviate_options.trials, "trials per arm (default 100)");
    deviate->add_option("--seed", deviate_options.seed, "master seed (default 0)");
    deviate->add_option("--parallel", deviate_options.parallel,
                        "worker threads for trials (default 1)");
    deviate->add_flag("--independent-seeds", deviate_options.independent_seeds,
                      "use independent seeds for the two arms");
    deviate->add_option("--report-out", deviate_options.report_out, "write report JSON");
    deviate->add_option("--csv-out", deviate_options.csv_out, "write per-trial cost CSV");
    deviate->add_flag("--json", deviate_options.json, "machine-readable stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return privbr::kExitParse;
    }

    if (run->parsed()) return privbr::cmd_run(run_options, std::cout, std::cerr);
    if (params->parsed()) return privbr::cmd_params(params_options, std::cout, std::cerr);
    if (deviate->parsed()) return privbr::cmd_deviate(deviate_options, std::cout, std::cerr);
    return privbr::kExitParse;
}
