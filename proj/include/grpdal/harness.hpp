#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grpdal/solvers.hpp"

namespace grpdal {

enum class ExperimentKind { lasso, tv_deblur, synthetic_strongly_convex };

/// Parsed flat key-value experiment description (grammar in the README).
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::lasso;
    std::vector<std::uint64_t> seeds = {1};
    std::string out_dir = "results";
    std::vector<std::string> solvers;
    std::map<std::string, std::string> raw;  // all parsed keys

    // lasso
    std::size_t n = 100, p = 100, s = 10;
    double zeta = 0.1;
    // tv-deblur
    std::size_t height = 64, width = 64;
    double nu = 0.1, density = 0.2, kappa_split = 0.5;
    int window = 9;
    // synthetic
    std::size_t dim = 50;
    double coupling = 0.5102;
    double rho_target = 0.98;

    int max_iters = 5000;
    bool reference_load_only = false;
    int reference_budget = 20000;
    StopRule stop{StopRule::Kind::objective_residual, 1e-10};
    bool no_timing = false;
};

ExperimentConfig parse_experiment_config(const std::string& path);

/// Builds the per-solver SolverConfig from experiment defaults plus
/// "<solver>.key = value" overrides.
SolverConfig solver_config_for(const ExperimentConfig& cfg, const std::string& solver,
                               std::uint64_t seed);

struct CellResult {
    std::string solver;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    int iterations = 0;
    long ls_trials = 0;
    long extra_ls_trials = 0;
    long inner_iters = 0;
    double final_objective = 0.0;
    double final_gap = 0.0;
    double wall_time_s = 0.0;
};

struct ExperimentOutcome {
    std::vector<CellResult> cells;
    bool any_solver_failed = false;
};

/// Runs every (solver x seed) cell, writes one CSV per cell, a JSON summary,
/// and (for tv-deblur) PGM images.  Reference solutions are computed once per
/// instance and cached on disk keyed by kind/dimensions/seed
/// (GRPDAL_CACHE_DIR overrides the cache location).
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

/// Computes and caches the reference solutions for every seed without
/// running solvers (the `ref` subcommand).
void prepare_references(const ExperimentConfig& cfg);

/// Budgeted invariant suite for `grpdal-kit check`; prints one line per check,
/// returns the number of failures.
int run_selfcheck();

}  // namespace grpdal
