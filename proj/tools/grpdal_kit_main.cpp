#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "grpdal/error.hpp"
#include "grpdal/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"grpdal-kit: golden-ratio primal-dual benchmark runner"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    long seed_override = -1;
    bool no_timing = false;

    auto* run = app.add_subcommand("run", "run an experiment described by a config file");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--seed", seed_override, "override the seed list with a single seed");
    run->add_option("--out", out_override, "override the output directory");
    run->add_flag("--no-timing", no_timing, "zero the wall-time column (deterministic output)");

    auto* ref = app.add_subcommand("ref", "compute and cache reference solutions");
    ref->add_option("config", config_path, "experiment config file")->required();
    ref->add_option("--seed", seed_override, "override the seed list with a single seed");
    ref->add_option("--out", out_override, "override the output directory");

    auto* check = app.add_subcommand("check", "run the quick invariant suite");
    (void)check;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("check")) {
            const int failures = grpdal::run_selfcheck();
            std::cout << (failures == 0 ? "check: all invariants hold\n"
                                        : "check: FAILURES detected\n");
            return failures == 0 ? 0 : 2;
        }
        grpdal::ExperimentConfig cfg = grpdal::parse_experiment_config(config_path);
        if (seed_override >= 0) cfg.seeds = {static_cast<std::uint64_t>(seed_override)};
        if (!out_override.empty()) cfg.out_dir = out_override;
        cfg.no_timing = no_timing;
        if (app.got_subcommand("ref")) {
            grpdal::prepare_references(cfg);
            return 0;
        }
        const grpdal::ExperimentOutcome outcome = grpdal::run_experiment(cfg);
        for (const auto& cell : outcome.cells) {
            std::cout << cell.solver << " seed " << cell.seed << ": ";
            if (cell.failed)
                std::cout << "FAILED (" << cell.error << ")\n";
            else
                std::cout << cell.iterations << " iterations, " << cell.ls_trials
                          << " dual prox evaluations\n";
        }
        return outcome.any_solver_failed ? 2 : 0;
    } catch (const grpdal::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const grpdal::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
