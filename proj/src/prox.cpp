#include "grpdal/prox.hpp"

#include <cmath>
#include <random>
#include <string>

#include "grpdal/error.hpp"

namespace grpdal {

namespace {

void check_req(const ProxRequest& req) {
    if (!(req.tau > 0.0)) throw InvalidArgument("ProxRequest: tau must be > 0");
    if (req.epsilon < 0.0) throw InvalidArgument("ProxRequest: epsilon must be >= 0");
    if (req.anchor.size() != req.h.dim())
        throw InvalidArgument("ProxRequest: anchor dimension mismatch");
    req.metric.check_dim(req.anchor, "ProxRequest");
}

Vec prox_exact_impl(const ConvexFunction& h, const Vec& anchor, double tau, const Metric& d) {
    const Vec& diag = d.diagonal();
    Vec z(anchor.size());
    if (const auto* l1 = h.as<ConvexFunction::ScaledL1>()) {
        for (std::size_t i = 0; i < anchor.size(); ++i) {
            const double c = diag[i] / tau;
            const double t = l1->weight / c;
            const double soft = sign(anchor[i]) * std::max(std::fabs(anchor[i]) - t, 0.0);
            z[i] = l1->quad > 0.0 ? soft * c / (c + l1->quad) : soft;
        }
        return z;
    }
    if (const auto* q = h.as<ConvexFunction::QuadraticPlusLinear>()) {
        for (std::size_t i = 0; i < anchor.size(); ++i)
            z[i] = (diag[i] * anchor[i] - tau * q->shift[i]) / (diag[i] + tau);
        return z;
    }
    if (const auto* ind = h.as<ConvexFunction::IndicatorInfBallPlusLinear>()) {
        for (std::size_t i = 0; i < anchor.size(); ++i) {
            double v = anchor[i];
            if (!ind->linear.empty()) v -= tau * ind->linear[i] / diag[i];
            z[i] = std::clamp(v, -ind->radius, ind->radius);
        }
        return z;
    }
    if (const auto* sb = h.as<ConvexFunction::SeparableBlocks>()) {
        std::size_t off = 0;
        for (std::size_t i = 0; i < sb->parts.size(); ++i) {
            const std::size_t n = sb->dims[i];
            Vec blk_anchor(anchor.begin() + off, anchor.begin() + off + n);
            Metric blk_metric(Vec(diag.begin() + off, diag.begin() + off + n));
            Vec blk = prox_exact_impl(*sb->parts[i], blk_anchor, tau, blk_metric);
            std::copy(blk.begin(), blk.end(), z.begin() + off);
            off += n;
        }
        return z;
    }
    throw UnsupportedFunction("prox_exact: descriptor has no closed-form prox");
}

}  // namespace

Vec prox_exact(const ProxRequest& req) {
    check_req(req);
    return prox_exact_impl(req.h, req.anchor, req.tau, req.metric);
}

double fenchel_gap(const ConvexFunction& h, const Vec& z, const Vec& p) {
    if (const auto* comp = h.as<ConvexFunction::L1OfOperator>()) {
        // p is the dual witness w in the range space of B
        if (p.size() != comp->op->output_dim())
            throw InvalidArgument("fenchel_gap: witness dimension mismatch");
        if (nrm_inf(p) > comp->weight * (1.0 + 1e-12) + 1e-300) return kInf;
        const Vec bz = comp->op->apply(z);
        return comp->weight * nrm1(bz) - dot(p, bz);
    }
    const double hz = h.value(z);
    if (std::isinf(hz)) return kInf;
    const double hs = h.conjugate(p);
    if (std::isinf(hs)) return kInf;
    return hz + hs - dot(p, z);
}

ProxCertificate certify_type2(const ProxRequest& req, const Vec& z) {
    check_req(req);
    if (z.size() != req.anchor.size())
        throw InvalidArgument("certify_type2: candidate dimension mismatch");
    ProxCertificate cert;
    cert.kind = CertKind::type2;
    const Vec& diag = req.metric.diagonal();
    cert.witness.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        cert.witness[i] = diag[i] * (req.anchor[i] - z[i]) / req.tau;
    cert.achieved_gap = fenchel_gap(req.h, z, cert.witness);
    cert.ok = cert.achieved_gap <= req.epsilon;
    return cert;
}

ProxCertificate certify_type0(const ProxRequest& req, const Vec& z) {
    Vec zhat = prox_exact(req);
    ProxCertificate cert;
    cert.kind = CertKind::type0;
    Vec d = sub(z, zhat);
    const double nd = req.metric.norm(d);
    cert.achieved_gap = nd * nd / (2.0 * req.tau);
    cert.ok = cert.achieved_gap <= req.epsilon;
    return cert;
}

ProxCertificate certify_type1(const ProxRequest& req, const Vec& z) {
    Vec zhat = prox_exact(req);
    auto j = [&](const Vec& v) {
        Vec d = sub(v, req.anchor);
        const double nd = req.metric.norm(d);
        return req.h.value(v) + nd * nd / (2.0 * req.tau);
    };
    ProxCertificate cert;
    cert.kind = CertKind::type1;
    cert.achieved_gap = j(z) - j(zhat);
    cert.ok = std::isfinite(cert.achieved_gap) && cert.achieved_gap <= req.epsilon;
    return cert;
}

namespace {

// smooth/nonsmooth split of J for the generic proximal-gradient inner loop:
// smooth = metric term + smooth pieces of h, nonsmooth = pure pieces of h
// with a closed-form Euclidean prox.
struct Split {
    // adds the smooth gradient of h at x into g
    std::function<void(const Vec&, Vec&)> h_grad;
    // per-coordinate curvature bound of the smooth part of h
    double h_curv = 0.0;
    // Euclidean prox of the nonsmooth part with stepsize s
    std::function<void(Vec&, double)> ns_prox;
};

Split make_split(const ConvexFunction& h) {
    Split s;
    if (const auto* l1 = h.as<ConvexFunction::ScaledL1>()) {
        const double w = l1->weight, q = l1->quad;
        s.h_curv = q;
        s.h_grad = [q](const Vec& x, Vec& g) {
            if (q > 0.0)
                for (std::size_t i = 0; i < x.size(); ++i) g[i] += q * x[i];
        };
        s.ns_prox = [w](Vec& x, double step) {
            const double t = w * step;
            for (double& v : x) v = sign(v) * std::max(std::fabs(v) - t, 0.0);
        };
        return s;
    }
    if (const auto* qf = h.as<ConvexFunction::QuadraticPlusLinear>()) {
        const Vec shift = qf->shift;
        s.h_curv = 1.0;
        s.h_grad = [shift](const Vec& x, Vec& g) {
            for (std::size_t i = 0; i < x.size(); ++i) g[i] += x[i] + shift[i];
        };
        s.ns_prox = [](Vec&, double) {};
        return s;
    }
    if (const auto* ind = h.as<ConvexFunction::IndicatorInfBallPlusLinear>()) {
        const Vec lin = ind->linear;
        const double r = ind->radius;
        s.h_curv = 0.0;
        s.h_grad = [lin](const Vec&, Vec& g) {
            if (!lin.empty())
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += lin[i];
        };
        s.ns_prox = [r](Vec& x, double) {
            for (double& v : x) v = std::clamp(v, -r, r);
        };
        return s;
    }
    if (const auto* sb = h.as<ConvexFunction::SeparableBlocks>()) {
        std::vector<Split> subs;
        std::vector<std::size_t> dims = sb->dims;
        double curv = 0.0;
        for (const auto& p : sb->parts) {
            subs.push_back(make_split(*p));
            curv = std::max(curv, subs.back().h_curv);
        }
        s.h_curv = curv;
        s.h_grad = [subs, dims](const Vec& x, Vec& g) {
            std::size_t off = 0;
            for (std::size_t i = 0; i < subs.size(); ++i) {
                Vec xb(x.begin() + off, x.begin() + off + dims[i]);
                Vec gb(dims[i], 0.0);
                subs[i].h_grad(xb, gb);
                for (std::size_t j = 0; j < dims[i]; ++j) g[off + j] += gb[j];
                off += dims[i];
            }
        };
        s.ns_prox = [subs, dims](Vec& x, double step) {
            std::size_t off = 0;
            for (std::size_t i = 0; i < subs.size(); ++i) {
                Vec xb(x.begin() + off, x.begin() + off + dims[i]);
                subs[i].ns_prox(xb, step);
                std::copy(xb.begin(), xb.end(), x.begin() + off);
                off += dims[i];
            }
        };
        return s;
    }
    throw UnsupportedFunction("prox_inexact: descriptor not supported by the generic inner loop");
}

bool has_closed_form(const ConvexFunction& h) {
    if (h.as<ConvexFunction::L1OfOperator>()) return false;
    if (const auto* sb = h.as<ConvexFunction::SeparableBlocks>()) {
        for (const auto& p : sb->parts)
            if (!has_closed_form(*p)) return false;
    }
    return true;
}

}  // namespace

InexactProxResult prox_inexact(const ProxRequest& req, const Vec* warm_start) {
    check_req(req);
    if (req.epsilon == 0.0) {
        if (!has_closed_form(req.h))
            throw UnsupportedFunction("prox_inexact: epsilon = 0 requires a closed-form prox");
        InexactProxResult res;
        res.z = prox_exact(req);
        res.cert = certify_type2({req.h, req.anchor, req.tau, req.metric, kInf}, res.z);
        res.cert.ok = true;
        res.cert.inner_iterations = 0;
        return res;
    }
    const Split split = make_split(req.h);
    const Vec& diag = req.metric.diagonal();
    const double lip = req.metric.lambda_max() / req.tau + split.h_curv;
    const double step = 1.0 / lip;

    Vec z = warm_start ? *warm_start : req.anchor;
    double best = kInf;
    for (int j = 0; j <= kInnerCap; ++j) {
        ProxCertificate cert = certify_type2(req, z);
        cert.inner_iterations = j;
        best = std::min(best, cert.achieved_gap);
        if (cert.achieved_gap <= req.epsilon) return {std::move(z), std::move(cert)};
        // proximal-gradient step on J = smooth + nonsmooth
        Vec g(z.size(), 0.0);
        split.h_grad(z, g);
        for (std::size_t i = 0; i < z.size(); ++i)
            g[i] += diag[i] * (z[i] - req.anchor[i]) / req.tau;
        for (std::size_t i = 0; i < z.size(); ++i) z[i] -= step * g[i];
        split.ns_prox(z, step);
    }
    throw InexactSolveFailed("prox_inexact: inner iteration cap exceeded", best);
}

double composite_curvature_bound(const LinearOperator& b, const Metric& d) {
    std::mt19937_64 rng(0x5eedbeefULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(b.output_dim());
    for (double& e : v) e = gauss(rng);
    double n = nrm2(v);
    if (n == 0.0) return 1.0;
    scal(1.0 / n, v);
    double lam = 1e-12;
    for (int it = 0; it < 100; ++it) {
        Vec mv = b.apply(d.apply_inv(b.adjoint_apply(v)));
        lam = std::max(lam, dot(v, mv));
        n = nrm2(mv);
        if (n == 0.0) break;
        scal(1.0 / n, mv);
        v = std::move(mv);
    }
    return 1.01 * lam;
}

CompositeProxResult prox_l1_composite(const ProxRequest& req, const Vec* warm_dual,
                                      double op_curvature_bound) {
    check_req(req);
    const LinearOperator* b = nullptr;
    double weight = 0.0;
    bool identity_op = false;
    if (const auto* comp = req.h.as<ConvexFunction::L1OfOperator>()) {
        b = comp->op.get();
        weight = comp->weight;
    } else if (const auto* l1 = req.h.as<ConvexFunction::ScaledL1>()) {
        if (l1->quad != 0.0)
            throw UnsupportedFunction("prox_l1_composite: quad-augmented l1 uses prox_inexact");
        weight = l1->weight;
        identity_op = true;
    } else {
        throw UnsupportedFunction("prox_l1_composite: descriptor must be an l1 form");
    }
    const std::size_t wd = identity_op ? req.h.dim() : b->output_dim();

    Vec w = warm_dual ? *warm_dual : Vec(wd, 0.0);
    if (w.size() != wd) throw InvalidArgument("prox_l1_composite: warm dual dimension mismatch");
    for (double& v : w) v = std::clamp(v, -weight, weight);

    const Vec& diag = req.metric.diagonal();
    // dual objective: (tau/2) ||B^T w||_{D^-1}^2 - <w, B anchor>, Lipschitz
    // constant tau * lambda_max(B D^-1 B^T)
    const double lip = std::max(req.tau * op_curvature_bound, 1e-300);
    const double step = 1.0 / lip;

    auto recover = [&](const Vec& wv) {
        Vec btw = identity_op ? wv : b->adjoint_apply(wv);
        Vec z(req.anchor.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] = req.anchor[i] - req.tau * btw[i] / diag[i];
        return z;
    };

    double best = kInf;
    for (int j = 0; j <= kInnerCap; ++j) {
        Vec z = recover(w);
        Vec bz = identity_op ? z : b->apply(z);
        const double gap = weight * nrm1(bz) - dot(w, bz);
        best = std::min(best, gap);
        if (gap <= req.epsilon) {
            ProxCertificate cert;
            cert.kind = CertKind::type2;
            cert.achieved_gap = gap;
            cert.witness = w;
            cert.inner_iterations = j;
            cert.ok = true;
            return {std::move(z), std::move(cert), std::move(w)};
        }
        // projected gradient: grad of the dual objective is -B z(w)
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = std::clamp(w[i] + step * bz[i], -weight, weight);
    }
    throw InexactSolveFailed("prox_l1_composite: inner iteration cap exceeded", best);
}

}  // namespace grpdal
