#include "grpdal/saddle_problem.hpp"

#include <cmath>
#include <string>

#include "grpdal/error.hpp"
#include "grpdal/prox.hpp"

namespace grpdal {

SaddleProblem::SaddleProblem(ConvexFunction f_, ConvexFunction g_, LinearOperator a_)
    : f(std::move(f_)), g(std::move(g_)), a(std::move(a_)) {
    if (f.dim() != a.input_dim() || g.dim() != a.output_dim())
        throw InvalidArgument("SaddleProblem: f/g/A dimensions inconsistent");
}

void SaddleProblem::install_reference(Vec xbar_, Vec ybar_) {
    if (xbar_.size() != f.dim() || ybar_.size() != g.dim())
        throw InvalidArgument("install_reference: dimension mismatch");
    xbar = std::move(xbar_);
    ybar = std::move(ybar_);
    at_ybar = a.adjoint_apply(ybar);
    a_xbar = a.apply(xbar);
    f_xbar = f.value(xbar);
    g_ybar = g.value(ybar);
    if (std::isinf(f_xbar) || std::isinf(g_ybar))
        throw DomainViolation("install_reference: reference point outside dom f x dom g");
    has_reference = true;
}

double SaddleProblem::reference_residual(const Vec& x, const Vec& y) const {
    Metric in = Metric::identity(f.dim());
    Metric out = Metric::identity(g.dim());
    // one unit-step proximal fixed-point update
    Vec xa = sub(x, a.adjoint_apply(y));
    Vec px = prox_exact({f, xa, 1.0, in, 0.0});
    Vec ya = add(y, a.apply(x));
    Vec py = prox_exact({g, ya, 1.0, out, 0.0});
    return nrm2(sub(px, x)) + nrm2(sub(py, y));
}

GapReport gap(const SaddleProblem& problem, const Vec& x, const Vec& y) {
    if (!problem.has_reference)
        throw PreconditionViolation("gap: no reference saddle point installed");
    const double fx = problem.f.value(x);
    if (std::isinf(fx))
        throw DomainViolation("gap: f(x) is infinite (x violates the domain of f)");
    const double gy = problem.g.value(y);
    if (std::isinf(gy))
        throw DomainViolation("gap: g(y) is infinite (y violates the indicator constraint of g)");
    GapReport r;
    Vec dx = sub(x, problem.xbar);
    Vec dy = sub(y, problem.ybar);
    r.p_value = fx - problem.f_xbar + dot(dx, problem.at_ybar);
    r.d_value = gy - problem.g_ybar - dot(dy, problem.a_xbar);
    r.g_value = r.p_value + r.d_value;
    return r;
}

void ergodic_update(GapReport& report, double weight, const Vec& x, const Vec& y) {
    if (!(weight > 0.0)) throw InvalidArgument("ergodic_update: weight must be > 0");
    if (report.count == 0) {
        report.x_sum.assign(x.size(), 0.0);
        report.y_sum.assign(y.size(), 0.0);
    }
    axpy(weight, x, report.x_sum);
    axpy(weight, y, report.y_sum);
    report.weight_sum += weight;
    report.count += 1;
}

std::pair<Vec, Vec> ergodic_point(const GapReport& report) {
    if (report.count == 0 || report.weight_sum <= 0.0)
        throw PreconditionViolation("ergodic_point: empty accumulator");
    return {scaled(report.x_sum, 1.0 / report.weight_sum),
            scaled(report.y_sum, 1.0 / report.weight_sum)};
}

Vec golden_ratio_combination(const Vec& x, const Vec& z, double phi) {
    if (!(phi > 1.0)) throw InvalidArgument("golden_ratio_combination: phi must be > 1");
    Vec r(x.size());
    const double cx = (phi - 1.0) / phi, cz = 1.0 / phi;
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = cx * x[i] + cz * z[i];
    return r;
}

}  // namespace grpdal
