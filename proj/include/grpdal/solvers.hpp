#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grpdal/metric.hpp"
#include "grpdal/prox.hpp"
#include "grpdal/saddle_problem.hpp"

namespace grpdal {

/// delta_k / eps_k inner-precision schedules: zero, c/k^alpha, or c*q^k.
struct ErrorSchedule {
    enum class Kind { zero, power, geometric };
    Kind kind = Kind::zero;
    double c = 1.0;
    double alpha = 2.0;
    double q = 0.5;

    static ErrorSchedule none() { return {}; }
    static ErrorSchedule power(double c, double alpha) {
        return {Kind::power, c, alpha, 0.0};
    }
    static ErrorSchedule geometric(double c, double q) {
        return {Kind::geometric, c, 0.0, q};
    }
    double at(int k) const;
};

enum class TrialPolicy { aggressive, conservative };
enum class SolveStatus { converged, budget_exhausted, inexact_solve_failed };

struct StopRule {
    enum class Kind { iteration_budget, objective_residual, gap_threshold };
    Kind kind = Kind::iteration_budget;
    double threshold = 0.0;
};

struct SolverConfig {
    double phi = 1.618;
    double eta = 0.99;
    double mu = 0.7;
    double beta0 = 1.0;
    double tau0 = 0.0;  // 0: perturbation rule tau0 = |dy| / (sqrt(beta) |A* dy|)
    ErrorSchedule delta_sched;  // primal
    ErrorSchedule eps_sched;    // dual
    int max_outer = 1000;
    StopRule stop;
    Metric s;  // primal metric; empty => identity
    Metric t;  // dual metric; empty => identity
    TrialPolicy trial = TrialPolicy::aggressive;
    std::uint64_t seed = 1;
    Vec x0, y0;  // empty => zeros
    bool verify_certificates = true;
    // scheduled tolerances below this delegate to the closed-form prox
    double exact_delegate_floor = 1e-13;
    int norm_power_iters = 200;
    double fixed_tau = 0.0;             // algorithm-3 constant stepsize
    double pda_tau = 0.0, pda_sigma = 0.0;  // 0: 1/(10L) and 0.99*10/L

    double psi() const { return (1.0 + phi) / (phi * phi); }
};

struct IterRow {
    int k = 0;
    double objective = 0.0;
    double p = 0.0, d = 0.0, g = 0.0;  // NaN without a reference point
    double ergodic_gap = 0.0;
    double tau = 0.0;
    double beta = 0.0;
    int ls_trials = 0;
    int inner_iters = 0;
    double sched_delta = 0.0, sched_eps = 0.0;
    double achieved_delta = 0.0, achieved_eps = 0.0;
    double lyapunov = 0.0;
};

struct RunReport {
    std::vector<IterRow> rows;
    GapReport ergodic;
    SolveStatus status = SolveStatus::budget_exhausted;
    int iterations = 0;
    long total_ls_trials = 0;        // dual-prox evaluations
    long total_extra_ls_trials = 0;  // trials beyond the first
    long total_inner_iters = 0;
    int cert_recompute_failures = 0;
    double op_norm = 0.0;    // L = ||A*||_T estimate used by the run
    double tau_floor = 0.0;  // eta sqrt(phi) / (L sqrt(beta psi)); 0 if L = 0
    int ls_verify_warnings = 0;  // algorithm 3 only
    double rho = 0.0;            // algorithm 3 only
    Vec x, y, z;
    std::string message;
};

/// Real root of xi^3 - xi - 1 = 0 (lower end of phi's range for the
/// accelerated variants), by bisection.
double compute_xi();

/// beta = gamma_f Lambda2 / (gamma_g Lambda1), rho = 1 / (1 + gamma_f tau / Lambda1).
std::pair<double, double> compute_strongly_convex_params(double gamma_f, double gamma_g,
                                                         double lambda1_max,
                                                         double lambda2_max, double tau);

/// Inexact golden-ratio primal-dual with dual linesearch (main solver).
RunReport ip_grpdal(const SaddleProblem& problem, const SolverConfig& config);

/// ip_grpdal with zero error schedules (exact proximal steps).
RunReport grpdal_baseline(const SaddleProblem& problem, SolverConfig config);

/// Accelerated variant for gamma_f-strongly-convex f: growing beta_k,
/// per-iteration omega_k, linesearch without the eta factor.
RunReport ip_grpdal_accelerated_partial(const SaddleProblem& problem,
                                        const SolverConfig& config);

/// Accelerated variant for f and g both strongly convex: constant tau and
/// beta from compute_strongly_convex_params, rho^{-k} ergodic weights, the
/// linesearch only verifies the acceptance inequality.
RunReport ip_grpdal_accelerated_full(const SaddleProblem& problem,
                                     const SolverConfig& config);

/// Chambolle-Pock with extrapolation 1 and fixed steps (tau sigma ||A||^2 < 1).
RunReport pda_baseline(const SaddleProblem& problem, const SolverConfig& config);

/// Primal-dual with Malitsky-Pock dual linesearch (theta extrapolation on the
/// primal; acceptance inequality with phi replaced by 1).
RunReport pdal_baseline(const SaddleProblem& problem, const SolverConfig& config);

/// phi/(phi-1) ||z - xbar||_S^2 + (1/beta) ||y - ybar||_T^2
double lyapunov_value(const SaddleProblem& problem, const Metric& s, const Metric& t,
                      double phi, double beta, const Vec& z, const Vec& y);

struct LinesearchResult {
    double tau_next = 0.0;
    Vec y_next;
    ProxCertificate cert;
    int trials = 0;
    int inner_iters = 0;
};

/// One dual linesearch (step 3): from trial stepsize down by factor mu until
/// sqrt(beta tau') N(A*(y'-y)) <= eta_eff sqrt(phi/tau_k) ||y'-y||_T, where
/// N(v) = sqrt(lambda_min(T)) ||v||.  Exposed for tests.
LinesearchResult dual_linesearch(const SaddleProblem& problem, const SolverConfig& config,
                                 const Metric& t, const Vec& x_next, const Vec& y,
                                 double tau_k, double beta, double eps_k, double eta_eff,
                                 double op_norm);

}  // namespace grpdal
