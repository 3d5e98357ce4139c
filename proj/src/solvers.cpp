#include "grpdal/solvers.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "grpdal/error.hpp"

namespace grpdal {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxTrials = 200;

double golden() { return 0.5 * (1.0 + std::sqrt(5.0)); }

Metric metric_or_identity(const Metric& m, std::size_t n, const char* who) {
    if (m.dim() == 0) return Metric::identity(n);
    if (m.dim() != n)
        throw InvalidArgument(std::string(who) + ": metric dimension mismatch");
    return m;
}

void validate_common(const SolverConfig& cfg) {
    if (!(cfg.eta > 0.0 && cfg.eta < 1.0)) throw InvalidArgument("config: eta must lie in (0,1)");
    if (!(cfg.mu > 0.0 && cfg.mu < 1.0)) throw InvalidArgument("config: mu must lie in (0,1)");
    if (!(cfg.beta0 > 0.0)) throw InvalidArgument("config: beta0 must be > 0");
    if (cfg.tau0 < 0.0) throw InvalidArgument("config: tau0 must be >= 0");
    if (cfg.max_outer < 1) throw InvalidArgument("config: max_outer must be >= 1");
}

void validate_alg1(const SolverConfig& cfg, const Metric& s, const Metric& t) {
    validate_common(cfg);
    if (!(cfg.phi > 1.0 && cfg.phi < golden()))
        throw InvalidArgument("config: phi must lie in (1, (1+sqrt(5))/2)");
    if (!(s.lambda_min() > cfg.eta) || !(t.lambda_min() > cfg.eta))
        throw InvalidArgument("config: metric eigenvalue gate lambda_min(S), lambda_min(T) > eta");
}

void validate_accel(const SolverConfig& cfg, const Metric& s, const Metric& t) {
    validate_common(cfg);
    const double xi = compute_xi();
    if (!(cfg.phi > xi && cfg.phi < golden()))
        throw InvalidArgument("config: accelerated variants need phi in (xi, (1+sqrt(5))/2)");
    if (!(s.lambda_min() > 1.0) || !(t.lambda_min() > 1.0))
        throw InvalidArgument("config: accelerated variants need lambda_min(S), lambda_min(T) > 1");
    if (!(s.lambda_max() > 1.0))
        throw InvalidArgument("config: accelerated variants need lambda_max(S) > 1");
}

double rule_tau0(const SaddleProblem& pr, const SolverConfig& cfg, const Vec& y0, double beta) {
    if (cfg.tau0 > 0.0) return cfg.tau0;
    std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 17u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec d(y0.size());
    for (double& v : d) v = 1e-2 * gauss(rng);
    const Vec atd = pr.a.adjoint_apply(d);
    const double den = std::sqrt(beta) * nrm2(atd);
    if (den == 0.0) return 1.0;
    return nrm2(d) / den;
}

struct ProxOutcome {
    Vec z;
    double achieved = 0.0;  // 0 for the exact path
    double cert_gap = 0.0;  // recomputable certificate gap
    int inner = 0;
    bool exact_path = false;
    ProxCertificate cert;
};

bool l1_witness_path(const ConvexFunction& h) {
    if (h.as<ConvexFunction::L1OfOperator>()) return true;
    if (const auto* l1 = h.as<ConvexFunction::ScaledL1>()) return l1->quad == 0.0;
    return false;
}

bool closed_form(const ConvexFunction& h) {
    if (h.as<ConvexFunction::L1OfOperator>()) return false;
    if (const auto* sb = h.as<ConvexFunction::SeparableBlocks>()) {
        for (const auto& p : sb->parts)
            if (!closed_form(*p)) return false;
    }
    return true;
}

// one certified prox solve with the path dispatch shared by all solvers
ProxOutcome solve_prox(const ConvexFunction& h, Vec anchor, double tau, const Metric& d,
                       double eps, const SolverConfig& cfg, const Vec* warm_primal,
                       Vec* warm_witness, double composite_curv, int* recompute_failures) {
    ProxOutcome out;
    const bool cf = closed_form(h);
    const double eps_eff = (cf && eps < cfg.exact_delegate_floor) ? 0.0 : eps;
    ProxRequest req{h, std::move(anchor), tau, d, eps_eff};
    if (eps_eff == 0.0) {
        if (!cf)
            throw UnsupportedFunction("solve_prox: zero tolerance on a descriptor without a closed form");
        out.z = prox_exact(req);
        out.exact_path = true;
        ProxRequest loose{h, req.anchor, tau, d, kInf};
        out.cert = certify_type2(loose, out.z);
        out.cert.ok = true;
        out.cert_gap = out.cert.achieved_gap;
        out.achieved = 0.0;
    } else if (l1_witness_path(h)) {
        auto res = prox_l1_composite(req, warm_witness && !warm_witness->empty() ? warm_witness : nullptr,
                                     composite_curv);
        out.z = std::move(res.z);
        out.cert = std::move(res.cert);
        out.inner = out.cert.inner_iterations;
        out.achieved = out.cert.achieved_gap;
        out.cert_gap = out.cert.achieved_gap;
        if (warm_witness) *warm_witness = res.dual;
    } else {
        auto res = prox_inexact(req, warm_primal);
        out.z = std::move(res.z);
        out.cert = std::move(res.cert);
        out.inner = out.cert.inner_iterations;
        out.achieved = out.cert.achieved_gap;
        out.cert_gap = out.cert.achieved_gap;
    }
    if (cfg.verify_certificates && recompute_failures) {
        const double again = fenchel_gap(h, out.z, out.cert.witness);
        if (!(again == out.cert.achieved_gap) &&
            !(std::isinf(again) && std::isinf(out.cert.achieved_gap)))
            ++(*recompute_failures);
    }
    return out;
}

struct LsOutcome {
    double tau_next = 0.0;
    Vec y_next;
    ProxOutcome prox;
    int trials = 0;
};

// step 3: trial stepsizes shrink by mu until the acceptance inequality holds;
// each trial recomputes only the dual prox (anchored at y, warm started at y)
LsOutcome run_linesearch(const SaddleProblem& pr, const SolverConfig& cfg, const Metric& t,
                         const Vec& ax_next, const Vec& y, double tau_k, double beta,
                         double eps_k, double eta_eff, double op_norm, bool shrink,
                         int* recompute_failures) {
    LsOutcome out;
    const double sqrt_lam2 = std::sqrt(t.lambda_min());
    double tau_t = shrink && cfg.trial == TrialPolicy::aggressive ? cfg.psi() * tau_k : tau_k;
    if (!shrink) tau_t = tau_k;  // verify-only mode keeps the fixed stepsize
    const double floor_tau =
        op_norm > 0.0 ? eta_eff * std::sqrt(cfg.phi) / (op_norm * std::sqrt(beta * cfg.psi())) : 0.0;
    while (true) {
        ++out.trials;
        if (out.trials > kMaxTrials)
            throw InternalError("dual linesearch exceeded 200 trials (theory violation)");
        const double sigma = beta * tau_t;
        Vec anchor = y;
        const Vec& td = t.diagonal();
        for (std::size_t i = 0; i < anchor.size(); ++i)
            anchor[i] += sigma * ax_next[i] / td[i];
        ProxOutcome px = solve_prox(pr.g, std::move(anchor), sigma, t, eps_k, cfg, &y, nullptr,
                                    0.0, recompute_failures);
        Vec dy = sub(px.z, y);
        const double lhs =
            std::sqrt(beta * tau_t) * sqrt_lam2 * nrm2(pr.a.adjoint_apply(dy));
        const double rhs = eta_eff * std::sqrt(cfg.phi / tau_k) * t.norm(dy);
        if (lhs <= rhs) {
            out.tau_next = tau_t;
            out.y_next = std::move(px.z);
            out.prox = std::move(px);
            return out;
        }
        if (!shrink) {
            // algorithm 3 runs at the constant stepsize of its theorem; a
            // failed check is logged by the caller, not acted on
            out.tau_next = tau_t;
            out.y_next = std::move(px.z);
            out.prox = std::move(px);
            out.trials = -out.trials;  // negative marks a verification failure
            return out;
        }
        tau_t *= cfg.mu;
        if (floor_tau > 0.0 && tau_t < 1e-3 * floor_tau)
            throw InternalError("dual linesearch stepsize underflow below 1e-3 * tau_floor");
    }
}

double eval_objective(const SaddleProblem& pr, const Vec& x) {
    return pr.objective ? pr.objective(x) : kNan;
}

bool stop_hit(const SaddleProblem& pr, const SolverConfig& cfg, double obj, double gval) {
    switch (cfg.stop.kind) {
        case StopRule::Kind::objective_residual:
            return pr.objective_star && std::isfinite(obj) &&
                   obj - *pr.objective_star < cfg.stop.threshold;
        case StopRule::Kind::gap_threshold:
            return std::isfinite(gval) && gval <= cfg.stop.threshold;
        case StopRule::Kind::iteration_budget:
            return false;
    }
    return false;
}

enum class Variant { plain, accel_partial, accel_full };

RunReport run_grpdal_family(const SaddleProblem& pr, const SolverConfig& cfg, Variant variant) {
    const Metric s = metric_or_identity(cfg.s, pr.f.dim(), "solver S");
    const Metric t = metric_or_identity(cfg.t, pr.g.dim(), "solver T");
    if (variant == Variant::plain)
        validate_alg1(cfg, s, t);
    else
        validate_accel(cfg, s, t);

    const double gamma_f = pr.f.gamma();
    if (variant == Variant::accel_partial && !(gamma_f > 0.0))
        throw PreconditionViolation(
            "ip_grpdal_accelerated_partial: f has no strong convexity; use ip_grpdal");
    double beta = cfg.beta0, rho = 0.0, fixed_tau = 0.0;
    if (variant == Variant::accel_full) {
        const double gamma_g = pr.g.gamma();
        if (!(gamma_f > 0.0) || !(gamma_g > 0.0))
            throw PreconditionViolation(
                "ip_grpdal_accelerated_full: both moduli must be positive");
        if (!(cfg.fixed_tau > 0.0))
            throw PreconditionViolation(
                "ip_grpdal_accelerated_full: config must carry the fixed tau of the linear-rate theorem");
        if (!(t.lambda_max() > 1.0))
            throw InvalidArgument("config: algorithm 3 needs lambda_max(T) > 1");
        auto [b, r] = compute_strongly_convex_params(gamma_f, gamma_g, s.lambda_max(),
                                                     t.lambda_max(), cfg.fixed_tau);
        beta = b;
        rho = r;
        fixed_tau = cfg.fixed_tau;
    }

    RunReport rep;
    rep.op_norm = operator_norm_in_metric(pr.a, t, cfg.norm_power_iters, cfg.seed);
    rep.rho = rho;
    const double psi = cfg.psi();
    rep.tau_floor =
        rep.op_norm > 0.0 ? cfg.eta * std::sqrt(cfg.phi) / (rep.op_norm * std::sqrt(beta * psi)) : 0.0;

    Vec x = cfg.x0.empty() ? Vec(pr.f.dim(), 0.0) : cfg.x0;
    Vec y = cfg.y0.empty() ? Vec(pr.g.dim(), 0.0) : cfg.y0;
    if (x.size() != pr.f.dim() || y.size() != pr.g.dim())
        throw InvalidArgument("config: x0/y0 dimension mismatch");
    Vec z = x;
    double tau = variant == Variant::accel_full ? fixed_tau : rule_tau0(pr, cfg, y, beta);

    Vec witness_state;  // dual witness warm start for l1-family primal proxes
    double composite_curv = 0.0;
    if (l1_witness_path(pr.f)) {
        if (const auto* comp = pr.f.as<ConvexFunction::L1OfOperator>())
            composite_curv = composite_curvature_bound(*comp->op, s);
        else
            composite_curv = 1.0 / s.lambda_min();
    }

    const double eta_eff = variant == Variant::plain ? cfg.eta : 1.0;
    double erg_weight_geo = 1.0;  // rho^{-k} for algorithm 3
    rep.rows.reserve(static_cast<std::size_t>(cfg.max_outer));

    for (int k = 0; k < cfg.max_outer; ++k) {
        const double delta = cfg.delta_sched.at(k + 1);
        const double eps = cfg.eps_sched.at(k + 1);

        z = golden_ratio_combination(x, z, cfg.phi);
        Vec anchor = z;
        {
            const Vec aty = pr.a.adjoint_apply(y);
            const Vec& sd = s.diagonal();
            for (std::size_t i = 0; i < anchor.size(); ++i)
                anchor[i] -= tau * aty[i] / sd[i];
        }
        ProxOutcome px = solve_prox(pr.f, std::move(anchor), tau, s, delta, cfg, &x,
                                    &witness_state, composite_curv, &rep.cert_recompute_failures);
        Vec x_next = std::move(px.z);

        double beta_next = beta;
        if (variant == Variant::accel_partial) {
            const double omega =
                (cfg.phi - psi) / (cfg.phi * s.lambda_max() + psi * gamma_f * tau);
            beta_next = beta * (1.0 + gamma_f * omega * tau);
        }

        // Lyapunov value of (z^{k+2}, y^k), computable before the dual step
        double lyap = kNan;
        if (pr.has_reference) {
            Vec z_next = golden_ratio_combination(x_next, z, cfg.phi);
            lyap = lyapunov_value(pr, s, t, cfg.phi, beta_next, z_next, y);
        }

        const Vec ax_next = pr.a.apply(x_next);
        LsOutcome ls = run_linesearch(pr, cfg, t, ax_next, y, tau, beta_next, eps, eta_eff,
                                      rep.op_norm, variant != Variant::accel_full,
                                      &rep.cert_recompute_failures);
        int trials = ls.trials;
        if (trials < 0) {
            ++rep.ls_verify_warnings;
            trials = -trials;
        }

        x = std::move(x_next);
        y = std::move(ls.y_next);
        tau = ls.tau_next;
        beta = beta_next;

        double wgt = tau;
        if (variant == Variant::accel_partial) wgt = beta * tau;
        if (variant == Variant::accel_full) {
            wgt = erg_weight_geo;
            erg_weight_geo /= rho;
        }
        ergodic_update(rep.ergodic, wgt, x, y);

        IterRow row;
        row.k = k + 1;
        row.objective = eval_objective(pr, x);
        row.tau = tau;
        row.beta = beta;
        row.ls_trials = trials;
        row.inner_iters = px.inner + ls.prox.inner;
        row.sched_delta = delta;
        row.sched_eps = eps;
        row.achieved_delta = px.achieved;
        row.achieved_eps = ls.prox.achieved;
        row.lyapunov = lyap;
        row.p = row.d = row.g = row.ergodic_gap = kNan;
        if (pr.has_reference) {
            GapReport gr = gap(pr, x, y);
            row.p = gr.p_value;
            row.d = gr.d_value;
            row.g = gr.g_value;
            auto [xe, ye] = ergodic_point(rep.ergodic);
            row.ergodic_gap = gap(pr, xe, ye).g_value;
        }
        rep.rows.push_back(row);
        rep.total_ls_trials += trials;
        rep.total_extra_ls_trials += trials - 1;
        rep.total_inner_iters += row.inner_iters;
        rep.iterations = k + 1;

        if (stop_hit(pr, cfg, row.objective, row.g)) {
            rep.status = SolveStatus::converged;
            break;
        }
    }
    rep.x = x;
    rep.y = y;
    rep.z = z;
    if (pr.has_reference && rep.ergodic.count > 0) {
        auto [xe, ye] = ergodic_point(rep.ergodic);
        GapReport ge = gap(pr, xe, ye);
        rep.ergodic.p_value = ge.p_value;
        rep.ergodic.d_value = ge.d_value;
        rep.ergodic.g_value = ge.g_value;
    }
    return rep;
}

}  // namespace

double ErrorSchedule::at(int k) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::power:
            return c / std::pow(static_cast<double>(k), alpha);
        case Kind::geometric:
            return c * std::pow(q, static_cast<double>(k));
    }
    return 0.0;
}

double compute_xi() {
    double lo = 1.0, hi = 2.0;
    auto f = [](double v) { return v * v * v - v - 1.0; };
    while (hi - lo > 1e-15) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> compute_strongly_convex_params(double gamma_f, double gamma_g,
                                                         double lambda1_max,
                                                         double lambda2_max, double tau) {
    if (!(gamma_f > 0.0) || !(gamma_g > 0.0) || !(lambda1_max > 0.0) ||
        !(lambda2_max > 0.0) || !(tau > 0.0))
        throw InvalidArgument("compute_strongly_convex_params: all inputs must be > 0");
    const double beta = gamma_f * lambda2_max / (gamma_g * lambda1_max);
    const double rho = 1.0 / (1.0 + gamma_f * tau / lambda1_max);
    return {beta, rho};
}

RunReport ip_grpdal(const SaddleProblem& problem, const SolverConfig& config) {
    return run_grpdal_family(problem, config, Variant::plain);
}

RunReport grpdal_baseline(const SaddleProblem& problem, SolverConfig config) {
    config.delta_sched = ErrorSchedule::none();
    config.eps_sched = ErrorSchedule::none();
    return run_grpdal_family(problem, config, Variant::plain);
}

RunReport ip_grpdal_accelerated_partial(const SaddleProblem& problem,
                                        const SolverConfig& config) {
    return run_grpdal_family(problem, config, Variant::accel_partial);
}

RunReport ip_grpdal_accelerated_full(const SaddleProblem& problem,
                                     const SolverConfig& config) {
    return run_grpdal_family(problem, config, Variant::accel_full);
}

RunReport pda_baseline(const SaddleProblem& problem, const SolverConfig& config) {
    const Metric s = Metric::identity(problem.f.dim());
    const Metric t = Metric::identity(problem.g.dim());
    RunReport rep;
    rep.op_norm = operator_norm_in_metric(problem.a, t, config.norm_power_iters, config.seed);
    double tau = config.pda_tau, sigma = config.pda_sigma;
    if (tau == 0.0 || sigma == 0.0) {
        if (rep.op_norm == 0.0)
            throw InvalidArgument("pda_baseline: zero operator needs explicit tau/sigma");
        if (tau == 0.0) tau = 1.0 / (10.0 * rep.op_norm);
        if (sigma == 0.0) sigma = 0.99 * 10.0 / rep.op_norm;
    }
    if (tau * sigma * rep.op_norm * rep.op_norm >= 1.0)
        throw InvalidArgument("pda_baseline: stepsizes violate tau*sigma*||A||^2 < 1");

    Vec x = config.x0.empty() ? Vec(problem.f.dim(), 0.0) : config.x0;
    Vec y = config.y0.empty() ? Vec(problem.g.dim(), 0.0) : config.y0;
    rep.rows.reserve(static_cast<std::size_t>(config.max_outer));
    for (int k = 0; k < config.max_outer; ++k) {
        Vec anchor = x;
        axpy(-tau, problem.a.adjoint_apply(y), anchor);
        Vec x_next = prox_exact({problem.f, std::move(anchor), tau, s, 0.0});
        Vec xhat = scaled(x_next, 2.0);
        axpy(-1.0, x, xhat);
        Vec yanchor = y;
        axpy(sigma, problem.a.apply(xhat), yanchor);
        Vec y_next = prox_exact({problem.g, std::move(yanchor), sigma, t, 0.0});
        x = std::move(x_next);
        y = std::move(y_next);
        ergodic_update(rep.ergodic, tau, x, y);

        IterRow row;
        row.k = k + 1;
        row.objective = eval_objective(problem, x);
        row.tau = tau;
        row.beta = sigma / tau;
        row.ls_trials = 1;
        row.p = row.d = row.g = row.ergodic_gap = row.lyapunov = kNan;
        if (problem.has_reference) {
            GapReport gr = gap(problem, x, y);
            row.p = gr.p_value;
            row.d = gr.d_value;
            row.g = gr.g_value;
        }
        rep.rows.push_back(row);
        rep.total_ls_trials += 1;
        rep.iterations = k + 1;
        if (stop_hit(problem, config, row.objective, row.g)) {
            rep.status = SolveStatus::converged;
            break;
        }
    }
    rep.x = x;
    rep.y = y;
    return rep;
}

RunReport pdal_baseline(const SaddleProblem& problem, const SolverConfig& config) {
    validate_common(config);
    const Metric s = Metric::identity(problem.f.dim());
    const Metric t = Metric::identity(problem.g.dim());
    RunReport rep;
    rep.op_norm = operator_norm_in_metric(problem.a, t, config.norm_power_iters, config.seed);
    const double beta = config.beta0;
    double tau = rule_tau0(problem, config, config.y0.empty() ? Vec(problem.g.dim(), 0.0) : config.y0, beta);
    if (config.tau0 > 0.0) tau = config.tau0;

    Vec x = config.x0.empty() ? Vec(problem.f.dim(), 0.0) : config.x0;
    Vec y = config.y0.empty() ? Vec(problem.g.dim(), 0.0) : config.y0;
    double theta = 1.0;
    rep.rows.reserve(static_cast<std::size_t>(config.max_outer));
    for (int k = 0; k < config.max_outer; ++k) {
        Vec anchor = x;
        axpy(-tau, problem.a.adjoint_apply(y), anchor);
        Vec x_next = prox_exact({problem.f, std::move(anchor), tau, s, 0.0});

        double tau_t = config.trial == TrialPolicy::aggressive ? tau * std::sqrt(1.0 + theta) : tau;
        int trials = 0;
        Vec y_next;
        while (true) {
            ++trials;
            if (trials > kMaxTrials)
                throw InternalError("pdal linesearch exceeded 200 trials");
            const double th = tau_t / tau;
            Vec xbar = scaled(x_next, 1.0 + th);
            axpy(-th, x, xbar);
            const double sigma = beta * tau_t;
            Vec yanchor = y;
            axpy(sigma, problem.a.apply(xbar), yanchor);
            y_next = prox_exact({problem.g, std::move(yanchor), sigma, t, 0.0});
            Vec dy = sub(y_next, y);
            const double lhs = std::sqrt(beta * tau_t) * nrm2(problem.a.adjoint_apply(dy));
            const double rhs = config.eta * std::sqrt(1.0 / tau) * nrm2(dy);
            if (lhs <= rhs) break;
            tau_t *= config.mu;
        }
        theta = tau_t / tau;
        x = std::move(x_next);
        y = std::move(y_next);
        tau = tau_t;
        ergodic_update(rep.ergodic, tau, x, y);

        IterRow row;
        row.k = k + 1;
        row.objective = eval_objective(problem, x);
        row.tau = tau;
        row.beta = beta;
        row.ls_trials = trials;
        row.p = row.d = row.g = row.ergodic_gap = row.lyapunov = kNan;
        if (problem.has_reference) {
            GapReport gr = gap(problem, x, y);
            row.p = gr.p_value;
            row.d = gr.d_value;
            row.g = gr.g_value;
        }
        rep.rows.push_back(row);
        rep.total_ls_trials += trials;
        rep.total_extra_ls_trials += trials - 1;
        rep.iterations = k + 1;
        if (stop_hit(problem, config, row.objective, row.g)) {
            rep.status = SolveStatus::converged;
            break;
        }
    }
    rep.x = x;
    rep.y = y;
    return rep;
}

double lyapunov_value(const SaddleProblem& problem, const Metric& s, const Metric& t,
                      double phi, double beta, const Vec& z, const Vec& y) {
    if (!problem.has_reference)
        throw PreconditionViolation("lyapunov_value: no reference saddle point installed");
    Vec dz = sub(z, problem.xbar);
    Vec dy = sub(y, problem.ybar);
    const double nz = s.norm(dz), ny = t.norm(dy);
    return phi / (phi - 1.0) * nz * nz + ny * ny / beta;
}

LinesearchResult dual_linesearch(const SaddleProblem& problem, const SolverConfig& config,
                                 const Metric& t, const Vec& x_next, const Vec& y,
                                 double tau_k, double beta, double eps_k, double eta_eff,
                                 double op_norm) {
    const Vec ax = problem.a.apply(x_next);
    int failures = 0;
    LsOutcome out = run_linesearch(problem, config, t, ax, y, tau_k, beta, eps_k, eta_eff,
                                   op_norm, true, &failures);
    LinesearchResult res;
    res.tau_next = out.tau_next;
    res.y_next = std::move(out.y_next);
    res.cert = std::move(out.prox.cert);
    res.trials = out.trials;
    res.inner_iters = out.prox.inner;
    return res;
}

}  // namespace grpdal
