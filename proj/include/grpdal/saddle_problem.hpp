#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "grpdal/convex_function.hpp"
#include "grpdal/linear_operator.hpp"
#include "grpdal/vec.hpp"

namespace grpdal {

/// min_x max_y  L(x,y) = f(x) + <Ax, y> - g(y)
struct SaddleProblem {
    ConvexFunction f;
    ConvexFunction g;
    LinearOperator a;

    /// primal objective Phi(x) = max_y L(x,y), when available in closed form
    std::function<double(const Vec&)> objective;
    /// optimal objective value, when installed (enables the objective stop rule)
    std::optional<double> objective_star;

    // reference saddle point and cached quantities for gap evaluation
    bool has_reference = false;
    Vec xbar, ybar;
    Vec at_ybar;   // A* ybar
    Vec a_xbar;    // A xbar
    double f_xbar = 0.0, g_ybar = 0.0;

    SaddleProblem(ConvexFunction f_, ConvexFunction g_, LinearOperator a_);

    /// Installs (xbar, ybar) produced by a long high-accuracy run and caches
    /// the quantities the gap function needs.
    void install_reference(Vec xbar_, Vec ybar_);

    /// Fixed-point residual of one unit-step proximal update at (x, y); zero
    /// exactly at a saddle point.  Used to check installed references.
    double reference_residual(const Vec& x, const Vec& y) const;
};

/// Primal/dual gap values plus the weighted ergodic accumulator.
struct GapReport {
    double p_value = 0.0;
    double d_value = 0.0;
    double g_value = 0.0;

    Vec x_sum, y_sum;
    double weight_sum = 0.0;
    std::size_t count = 0;
};

/// P, D and G = P + D of (x, y) against the installed reference point.
GapReport gap(const SaddleProblem& problem, const Vec& x, const Vec& y);

/// Accumulates a weighted iterate pair into the report's ergodic state.
void ergodic_update(GapReport& report, double weight, const Vec& x, const Vec& y);

/// Weighted ergodic averages (X^N, Y^N).
std::pair<Vec, Vec> ergodic_point(const GapReport& report);

/// z_next = ((phi-1)/phi) x + (1/phi) z
Vec golden_ratio_combination(const Vec& x, const Vec& z, double phi);

}  // namespace grpdal
