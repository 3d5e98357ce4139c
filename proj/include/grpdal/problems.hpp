#pragma once

#include <cstdint>

#include "grpdal/saddle_problem.hpp"

namespace grpdal {

/// l1-regularized sparse recovery data (section-4 style):
/// A = randn(n,p)/sqrt(n), omega with s spikes uniform in [-10,10],
/// b = A omega + N(0, 0.1).
struct SparseRecoveryInstance {
    std::size_t n = 0, p = 0, s = 0;
    double zeta = 0.1;
    std::uint64_t seed = 0;
    LinearOperator a = LinearOperator::zero(1, 1);
    Vec omega;
    Vec b;
};

SparseRecoveryInstance gen_sparse_recovery(std::size_t n, std::size_t p, std::size_t s,
                                           double zeta, std::uint64_t seed);

/// min 0.5||Ax-b||^2 + zeta||x||_1 as the saddle problem with
/// f = zeta|.|_1 and g = 0.5|.|^2 + <b,.> (1-strongly convex).
SaddleProblem lasso_saddle(const SparseRecoveryInstance& inst);

double lasso_objective(const SparseRecoveryInstance& inst, const Vec& x);

/// Support-restricted normal-equation polish of an approximate LASSO solution;
/// returns a machine-precision minimizer when the support is identified.
Vec lasso_polish(const SparseRecoveryInstance& inst, const Vec& x_approx);

/// Runs a long exact solver pass, polishes, and installs (xbar, Axbar - b)
/// into the problem; returns the optimal objective value.
double install_lasso_reference(SaddleProblem& problem, const SparseRecoveryInstance& inst,
                               int budget_iters);

/// TV-L1 deblurring data: K = averaging blur (replicate padding), D = forward
/// differences, observation = salt-pepper(K clean), split kappa1+kappa2 = nu.
struct TVDeblurInstance {
    std::size_t h = 0, w = 0;
    int window = 9;
    double nu = 0.1;
    double kappa1 = 0.05, kappa2 = 0.05;
    double density = 0.2;
    std::uint64_t seed = 0;
    Vec clean;     // h*w in [0,1]
    Vec observed;  // f = salt_pepper(K clean)
};

LinearOperator make_gradient_operator(std::size_t h, std::size_t w);
LinearOperator make_blur_operator(std::size_t h, std::size_t w, int window = 9);

Vec salt_pepper(const Vec& image, double density, std::uint64_t seed);

/// Bundled 64x64-style synthetic test image; values stay inside (0,1) so
/// salt-pepper pixels are exactly the ones at {0,1}.
Vec phantom_image(std::size_t h, std::size_t w);

TVDeblurInstance gen_tv_deblur(std::size_t h, std::size_t w, double nu, double density,
                               std::uint64_t seed, int window = 9, double kappa_split = 0.5);

/// Saddle form of F(x) = ||Kx-f||_1 + nu||Dx||_1 with coupling
/// A = stack(K, kappa2 D), f(x) = kappa1 ||Dx||_1 (certified inexact prox),
/// and g = indicator blocks on (u, v) with the <f,u> shift on u.
SaddleProblem tv_l1_saddle(const TVDeblurInstance& inst);

double tv_objective(const TVDeblurInstance& inst, const Vec& x);
double relative_residual(const TVDeblurInstance& inst, const Vec& x, double f_star);

/// Fully strongly convex quadratic saddle used by the linear-rate experiment:
/// f = 0.5|x|^2 + <bf,x>, g = 0.5|y|^2 + <bg,y>, A = coupling * (orthogonal),
/// so every coupling singular value equals `coupling`.
struct QuadraticSaddleInstance {
    std::size_t dim = 0;
    double coupling = 0.5;
    std::uint64_t seed = 0;
    LinearOperator a = LinearOperator::zero(1, 1);
    Vec bf, bg;
};

QuadraticSaddleInstance gen_quadratic_saddle(std::size_t dim, double coupling,
                                             std::uint64_t seed);
SaddleProblem quadratic_saddle_problem(const QuadraticSaddleInstance& inst);
/// Exact saddle point by the dense solve of the optimality system.
std::pair<Vec, Vec> quadratic_saddle_solution(const QuadraticSaddleInstance& inst);

/// Dense symmetric-indefinite solve by partial-pivot elimination (test/ref use).
Vec solve_dense(std::size_t n, Vec a_rowmajor, Vec rhs);

}  // namespace grpdal
