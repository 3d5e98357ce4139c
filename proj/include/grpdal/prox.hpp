#pragma once

#include <functional>
#include <optional>

#include "grpdal/convex_function.hpp"
#include "grpdal/metric.hpp"
#include "grpdal/vec.hpp"

namespace grpdal {

/// Subproblem  J_y(x) = h(x) + (1/(2 tau)) ||x - anchor||_D^2  with target
/// type-2 precision epsilon.  Holds references; keep h and metric alive.
struct ProxRequest {
    const ConvexFunction& h;
    Vec anchor;
    double tau;
    const Metric& metric;
    double epsilon = 0.0;
};

enum class CertKind { type0, type1, type2 };

/// Certificate of an (in)exact proximal solve.  For type-2 the witness is the
/// vector fed to fenchel_gap: p = (1/tau) D (anchor - z) for closed-form
/// descriptors, or the feasible dual vector w with B^T w = p for L1OfOperator
/// and pure scaled-l1 solved through the dual.
struct ProxCertificate {
    CertKind kind = CertKind::type2;
    double achieved_gap = 0.0;
    Vec witness;
    int inner_iterations = 0;
    bool ok = false;
};

/// Exact extended proximal point; requires a closed-form descriptor.
Vec prox_exact(const ProxRequest& req);

/// h(z) + h*(p) - <p, z>, the smallest eps with p in the eps-subdifferential
/// of h at z (Fenchel-Young); +inf signals certificate failure.
/// For L1OfOperator descriptors p is interpreted as the dual witness w
/// (gap = weight*||Bz||_1 - <w, Bz>, +inf if ||w||_inf > weight).
double fenchel_gap(const ConvexFunction& h, const Vec& z, const Vec& p);

/// Type-2 certificate of z for req: p = (1/tau) D (anchor - z),
/// achieved_gap = fenchel_gap(h, z, p), ok iff achieved_gap <= epsilon.
ProxCertificate certify_type2(const ProxRequest& req, const Vec& z);

/// Test utilities (Definitions of type-0/type-1 approximations).
ProxCertificate certify_type0(const ProxRequest& req, const Vec& z);
ProxCertificate certify_type1(const ProxRequest& req, const Vec& z);

/// Smooth part of J with a known Lipschitz gradient, for the inner
/// proximal-gradient solver.
struct SmoothPart {
    std::function<Vec(const Vec&)> grad;
    double lipschitz = 1.0;
};

struct InexactProxResult {
    Vec z;
    ProxCertificate cert;
};

inline constexpr int kInnerCap = 10000;

/// Warm-started proximal-gradient inner solver with type-2 stopping: checks
/// the warm start first, then iterates z <- step_prox(z - grad/L) until the
/// certificate gap is <= epsilon.  epsilon = 0 requires a closed form (the
/// call is delegated to prox_exact).  Throws InexactSolveFailed past the cap.
InexactProxResult prox_inexact(const ProxRequest& req, const Vec* warm_start = nullptr);

struct CompositeProxResult {
    Vec z;
    ProxCertificate cert;
    Vec dual;  // feasible witness state, reusable as the next warm start
};

/// Certified inexact prox of weight*||B x||_1 (or pure scaled-l1 with B = I)
/// by projected gradient on the dual of the subproblem.  The candidate
/// z(w) = anchor - tau D^{-1} B^T w makes (1/tau) D (anchor - z) = B^T w
/// exact by construction, and the certificate gap is
/// weight*||B z||_1 - <w, B z>.
CompositeProxResult prox_l1_composite(const ProxRequest& req, const Vec* warm_dual,
                                      double op_curvature_bound);

/// Power-iteration bound (1.01 safety) on lambda_max(B D^{-1} B^T) used as the
/// dual-step curvature for prox_l1_composite.
double composite_curvature_bound(const LinearOperator& b, const Metric& d);

}  // namespace grpdal
