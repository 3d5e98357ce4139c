#include "grpdal/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "grpdal/error.hpp"
#include "grpdal/solvers.hpp"

namespace grpdal {

SparseRecoveryInstance gen_sparse_recovery(std::size_t n, std::size_t p, std::size_t s,
                                           double zeta, std::uint64_t seed) {
    if (n < 1 || p < 1) throw InvalidArgument("gen_sparse_recovery: n, p >= 1 required");
    if (s < 1 || s > p) throw InvalidArgument("gen_sparse_recovery: need 0 < s <= p");
    SparseRecoveryInstance inst;
    inst.n = n;
    inst.p = p;
    inst.s = s;
    inst.zeta = zeta;
    inst.seed = seed;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec a(n * p);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (double& v : a) v = scale * gauss(rng);
    inst.a = LinearOperator::dense(n, p, std::move(a));

    // support: uniform without replacement (partial Fisher-Yates)
    std::vector<std::size_t> idx(p);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < s; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, p - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    inst.omega.assign(p, 0.0);
    std::uniform_real_distribution<double> amp(-10.0, 10.0);
    for (std::size_t i = 0; i < s; ++i) inst.omega[idx[i]] = amp(rng);

    inst.b = inst.a.apply(inst.omega);
    std::normal_distribution<double> noise(0.0, 0.1);
    for (double& v : inst.b) v += noise(rng);
    return inst;
}

SaddleProblem lasso_saddle(const SparseRecoveryInstance& inst) {
    SaddleProblem pr(ConvexFunction::scaled_l1(inst.p, inst.zeta),
                     ConvexFunction::quadratic_plus_linear(inst.b), inst.a);
    const SparseRecoveryInstance data = inst;  // objective closure keeps its own copy
    pr.objective = [data](const Vec& x) { return lasso_objective(data, x); };
    return pr;
}

double lasso_objective(const SparseRecoveryInstance& inst, const Vec& x) {
    if (x.size() != inst.p) throw InvalidArgument("lasso_objective: dimension mismatch");
    Vec r = inst.a.apply(x);
    axpy(-1.0, inst.b, r);
    return 0.5 * dot(r, r) + inst.zeta * nrm1(x);
}

Vec solve_dense(std::size_t n, Vec a, Vec rhs) {
    if (a.size() != n * n || rhs.size() != n) throw InvalidArgument("solve_dense: bad sizes");
    std::vector<std::size_t> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r * n + c]) > std::fabs(a[best * n + c])) best = r;
        if (best != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[best * n + j]);
            std::swap(rhs[c], rhs[best]);
        }
        const double pivot = a[c * n + c];
        if (pivot == 0.0) throw InvalidArgument("solve_dense: singular matrix");
        for (std::size_t r = c + 1; r < n; ++r) {
            const double m = a[r * n + c] / pivot;
            if (m == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) a[r * n + j] -= m * a[c * n + j];
            rhs[r] -= m * rhs[c];
        }
    }
    Vec x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t j = ri + 1; j < n; ++j) s -= a[ri * n + j] * x[j];
        x[ri] = s / a[ri * n + ri];
    }
    return x;
}

Vec lasso_polish(const SparseRecoveryInstance& inst, const Vec& x_approx) {
    if (x_approx.size() != inst.p) throw InvalidArgument("lasso_polish: dimension mismatch");
    std::vector<std::size_t> sup;
    for (std::size_t j = 0; j < inst.p; ++j)
        if (std::fabs(x_approx[j]) > 1e-9) sup.push_back(j);
    if (sup.empty()) return Vec(inst.p, 0.0);

    const auto* dm = inst.a.as_dense();
    const std::size_t m = sup.size();
    // normal equations on the support: (As^T As) xs = As^T b - zeta*sign
    Vec ata(m * m, 0.0), rhs(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < inst.n; ++r)
                s += dm->a[r * inst.p + sup[i]] * dm->a[r * inst.p + sup[j]];
            ata[i * m + j] = ata[j * m + i] = s;
        }
        double s = 0.0;
        for (std::size_t r = 0; r < inst.n; ++r) s += dm->a[r * inst.p + sup[i]] * inst.b[r];
        rhs[i] = s - inst.zeta * sign(x_approx[sup[i]]);
    }
    Vec xs = solve_dense(m, std::move(ata), std::move(rhs));
    Vec out(inst.p, 0.0);
    for (std::size_t i = 0; i < m; ++i) out[sup[i]] = xs[i];

    // keep the polish only if it is consistent (signs kept, off-support KKT ok)
    for (std::size_t i = 0; i < m; ++i)
        if (sign(out[sup[i]]) != sign(x_approx[sup[i]])) return x_approx;
    Vec r = inst.a.apply(out);
    axpy(-1.0, inst.b, r);
    Vec grad = inst.a.adjoint_apply(r);
    for (std::size_t j = 0; j < inst.p; ++j)
        if (out[j] == 0.0 && std::fabs(grad[j]) > inst.zeta * (1.0 + 1e-9) + 1e-12)
            return x_approx;
    return out;
}

double install_lasso_reference(SaddleProblem& problem, const SparseRecoveryInstance& inst,
                               int budget_iters) {
    SolverConfig cfg;
    cfg.beta0 = 1.0;
    cfg.phi = 1.618;
    cfg.eta = 0.99;
    cfg.mu = 0.7;
    cfg.max_outer = budget_iters;
    cfg.seed = inst.seed + 101;
    cfg.y0 = inst.b;
    RunReport rep = grpdal_baseline(problem, cfg);
    Vec xbar = lasso_polish(inst, rep.x);
    Vec ybar = inst.a.apply(xbar);
    axpy(-1.0, inst.b, ybar);
    problem.install_reference(xbar, ybar);
    const double star = lasso_objective(inst, xbar);
    problem.objective_star = star;
    return star;
}

LinearOperator make_gradient_operator(std::size_t h, std::size_t w) {
    return LinearOperator::forward_gradient(h, w);
}

LinearOperator make_blur_operator(std::size_t h, std::size_t w, int window) {
    return LinearOperator::averaging_blur(h, w, window);
}

Vec salt_pepper(const Vec& image, double density, std::uint64_t seed) {
    if (density < 0.0 || density > 1.0)
        throw InvalidArgument("salt_pepper: density must lie in [0,1]");
    Vec out = image;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double& v : out) {
        const double u = unif(rng);
        if (u < density) v = (u < 0.5 * density) ? 0.0 : 1.0;
    }
    return out;
}

Vec phantom_image(std::size_t h, std::size_t w) {
    Vec img(h * w, 0.2);
    const double hc = 0.35 * static_cast<double>(h), wc = 0.35 * static_cast<double>(w);
    const double r2 = 0.22 * static_cast<double>(h) * 0.22 * static_cast<double>(h);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) {
            const double di = static_cast<double>(i) - hc, dj = static_cast<double>(j) - wc;
            if (di * di + dj * dj < r2) img[i * w + j] = 0.85;
        }
    for (std::size_t i = static_cast<std::size_t>(0.55 * h); i < 0.85 * h; ++i)
        for (std::size_t j = static_cast<std::size_t>(0.5 * w); j < 0.9 * w; ++j)
            img[i * w + j] = 0.55;
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) {
            const double d = std::fabs(static_cast<double>(i) - 0.75 * h) +
                             std::fabs(static_cast<double>(j) - 0.25 * w);
            if (d < 0.12 * static_cast<double>(h)) img[i * w + j] = 0.4;
        }
    return img;
}

TVDeblurInstance gen_tv_deblur(std::size_t h, std::size_t w, double nu, double density,
                               std::uint64_t seed, int window, double kappa_split) {
    if (!(kappa_split > 0.0 && kappa_split < 1.0))
        throw InvalidArgument("gen_tv_deblur: kappa split must lie in (0,1)");
    TVDeblurInstance inst;
    inst.h = h;
    inst.w = w;
    inst.window = window;
    inst.nu = nu;
    inst.kappa1 = kappa_split * nu;
    inst.kappa2 = nu - inst.kappa1;  // exact: kappa1 + kappa2 = nu
    inst.density = density;
    inst.seed = seed;
    inst.clean = phantom_image(h, w);
    Vec blurred = make_blur_operator(h, w, window).apply(inst.clean);
    inst.observed = salt_pepper(blurred, density, seed);
    return inst;
}

SaddleProblem tv_l1_saddle(const TVDeblurInstance& inst) {
    LinearOperator k = make_blur_operator(inst.h, inst.w, inst.window);
    LinearOperator d = make_gradient_operator(inst.h, inst.w);
    LinearOperator a = LinearOperator::stack({{1.0, k}, {inst.kappa2, d}});
    ConvexFunction f = ConvexFunction::l1_of_operator(inst.kappa1,
                                                      make_gradient_operator(inst.h, inst.w));
    // dual blocks: u against <f,u> inside the unit inf-ball, v inside the unit
    // inf-ball (the kappa2 scale lives in the coupling stack)
    ConvexFunction gu = ConvexFunction::indicator_inf_ball(inst.h * inst.w, 1.0, inst.observed);
    ConvexFunction gv = ConvexFunction::indicator_inf_ball(2 * inst.h * inst.w, 1.0);
    SaddleProblem pr(std::move(f),
                     ConvexFunction::separable_blocks({std::move(gu), std::move(gv)}),
                     std::move(a));
    const TVDeblurInstance data = inst;
    pr.objective = [data](const Vec& x) { return tv_objective(data, x); };
    return pr;
}

double tv_objective(const TVDeblurInstance& inst, const Vec& x) {
    if (x.size() != inst.h * inst.w) throw InvalidArgument("tv_objective: dimension mismatch");
    Vec kx = make_blur_operator(inst.h, inst.w, inst.window).apply(x);
    axpy(-1.0, inst.observed, kx);
    Vec dx = make_gradient_operator(inst.h, inst.w).apply(x);
    return nrm1(kx) + inst.nu * nrm1(dx);
}

double relative_residual(const TVDeblurInstance& inst, const Vec& x, double f_star) {
    if (!(f_star > 0.0)) throw InvalidArgument("relative_residual: F* must be > 0");
    return (tv_objective(inst, x) - f_star) / f_star;
}

QuadraticSaddleInstance gen_quadratic_saddle(std::size_t dim, double coupling,
                                             std::uint64_t seed) {
    QuadraticSaddleInstance inst;
    inst.dim = dim;
    inst.coupling = coupling;
    inst.seed = seed;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    // orthogonal factor by Gram-Schmidt of a Gaussian matrix (columns)
    Vec q(dim * dim);
    for (double& v : q) v = gauss(rng);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t o = 0; o < c; ++o) {
            double s = 0.0;
            for (std::size_t r = 0; r < dim; ++r) s += q[r * dim + c] * q[r * dim + o];
            for (std::size_t r = 0; r < dim; ++r) q[r * dim + c] -= s * q[r * dim + o];
        }
        double nn = 0.0;
        for (std::size_t r = 0; r < dim; ++r) nn += q[r * dim + c] * q[r * dim + c];
        nn = std::sqrt(nn);
        for (std::size_t r = 0; r < dim; ++r) q[r * dim + c] /= nn;
    }
    for (double& v : q) v *= coupling;
    inst.a = LinearOperator::dense(dim, dim, std::move(q));
    inst.bf.resize(dim);
    inst.bg.resize(dim);
    for (double& v : inst.bf) v = gauss(rng);
    for (double& v : inst.bg) v = gauss(rng);
    return inst;
}

SaddleProblem quadratic_saddle_problem(const QuadraticSaddleInstance& inst) {
    SaddleProblem pr(ConvexFunction::quadratic_plus_linear(inst.bf),
                     ConvexFunction::quadratic_plus_linear(inst.bg), inst.a);
    const QuadraticSaddleInstance data = inst;
    pr.objective = [data](const Vec& x) {
        // Phi(x) = f(x) + g*(Ax) with g* = 0.5||.-bg||^2
        Vec ax = data.a.apply(x);
        axpy(-1.0, data.bg, ax);
        return 0.5 * dot(x, x) + dot(data.bf, x) + 0.5 * dot(ax, ax);
    };
    return pr;
}

std::pair<Vec, Vec> quadratic_saddle_solution(const QuadraticSaddleInstance& inst) {
    // optimality: x + bf + A^T y = 0 ; y + bg - A x = 0
    const std::size_t n = inst.dim;
    const auto* dm = inst.a.as_dense();
    Vec m(4 * n * n, 0.0), rhs(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m[i * 2 * n + i] = 1.0;
        m[(n + i) * 2 * n + (n + i)] = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            m[i * 2 * n + (n + j)] = dm->a[j * n + i];    // A^T
            m[(n + i) * 2 * n + j] = -dm->a[i * n + j];   // -A
        }
        rhs[i] = -inst.bf[i];
        rhs[n + i] = -inst.bg[i];
    }
    Vec sol = solve_dense(2 * n, std::move(m), std::move(rhs));
    return {Vec(sol.begin(), sol.begin() + n), Vec(sol.begin() + n, sol.end())};
}

}  // namespace grpdal
