#include "grpdal/convex_function.hpp"

#include <cmath>
#include <string>

#include "grpdal/error.hpp"

namespace grpdal {

namespace {
// tolerance for membership of a witness in the l-inf ball of the l1 conjugate;
// covers the 1-ulp overshoot of exact soft-threshold arithmetic
inline bool in_ball(double v, double radius) {
    return std::fabs(v) <= radius * (1.0 + 1e-12) + 1e-300;
}
}  // namespace

ConvexFunction ConvexFunction::scaled_l1(std::size_t dim, double weight, double quad) {
    if (weight < 0.0 || quad < 0.0)
        throw InvalidArgument("scaled_l1: weight and quad must be >= 0");
    ConvexFunction f;
    f.dim_ = dim;
    f.payload_ = ScaledL1{weight, quad};
    return f;
}

ConvexFunction ConvexFunction::quadratic_plus_linear(Vec shift) {
    ConvexFunction f;
    f.dim_ = shift.size();
    f.payload_ = QuadraticPlusLinear{std::move(shift)};
    return f;
}

ConvexFunction ConvexFunction::indicator_inf_ball(std::size_t dim, double radius, Vec linear) {
    if (!(radius > 0.0)) throw InvalidArgument("indicator_inf_ball: radius must be > 0");
    if (!linear.empty() && linear.size() != dim)
        throw InvalidArgument("indicator_inf_ball: linear term dimension mismatch");
    ConvexFunction f;
    f.dim_ = dim;
    f.payload_ = IndicatorInfBallPlusLinear{radius, std::move(linear)};
    return f;
}

ConvexFunction ConvexFunction::separable_blocks(std::vector<ConvexFunction> parts) {
    if (parts.empty()) throw InvalidArgument("separable_blocks: no parts");
    ConvexFunction f;
    SeparableBlocks sb;
    f.dim_ = 0;
    for (auto& p : parts) {
        sb.dims.push_back(p.dim());
        f.dim_ += p.dim();
        sb.parts.push_back(std::make_shared<const ConvexFunction>(std::move(p)));
    }
    f.payload_ = std::move(sb);
    return f;
}

ConvexFunction ConvexFunction::l1_of_operator(double weight, LinearOperator op) {
    if (weight < 0.0) throw InvalidArgument("l1_of_operator: weight must be >= 0");
    ConvexFunction f;
    f.dim_ = op.input_dim();
    f.payload_ = L1OfOperator{weight, std::make_shared<const LinearOperator>(std::move(op))};
    return f;
}

double ConvexFunction::gamma() const {
    if (const auto* l1 = as<ScaledL1>()) return l1->quad;
    if (as<QuadraticPlusLinear>()) return 1.0;
    if (const auto* sb = as<SeparableBlocks>()) {
        double g = kInf;
        for (const auto& p : sb->parts) g = std::min(g, p->gamma());
        return g;
    }
    return 0.0;
}

double ConvexFunction::value(const Vec& x) const {
    if (x.size() != dim_)
        throw InvalidArgument("ConvexFunction::value: dimension mismatch");
    if (const auto* l1 = as<ScaledL1>()) {
        double v = l1->weight * nrm1(x);
        if (l1->quad > 0.0) v += 0.5 * l1->quad * dot(x, x);
        return v;
    }
    if (const auto* q = as<QuadraticPlusLinear>()) {
        return 0.5 * dot(x, x) + dot(q->shift, x);
    }
    if (const auto* ind = as<IndicatorInfBallPlusLinear>()) {
        for (double v : x)
            if (!in_ball(v, ind->radius)) return kInf;
        return ind->linear.empty() ? 0.0 : dot(ind->linear, x);
    }
    if (const auto* sb = as<SeparableBlocks>()) {
        double v = 0.0;
        std::size_t off = 0;
        for (std::size_t i = 0; i < sb->parts.size(); ++i) {
            Vec blk(x.begin() + off, x.begin() + off + sb->dims[i]);
            const double pv = sb->parts[i]->value(blk);
            if (std::isinf(pv)) return kInf;
            v += pv;
            off += sb->dims[i];
        }
        return v;
    }
    const auto& comp = std::get<L1OfOperator>(payload_);
    return comp.weight * nrm1(comp.op->apply(x));
}

double ConvexFunction::conjugate(const Vec& p) const {
    if (p.size() != dim_)
        throw InvalidArgument("ConvexFunction::conjugate: dimension mismatch");
    if (const auto* l1 = as<ScaledL1>()) {
        if (l1->quad == 0.0) {
            for (double v : p)
                if (!in_ball(v, l1->weight)) return kInf;
            return 0.0;
        }
        // (weight*|.|_1 + quad/2*|.|^2)* : sum max(|p_i|-weight, 0)^2 / (2 quad)
        double s = 0.0;
        for (double v : p) {
            const double e = std::max(std::fabs(v) - l1->weight, 0.0);
            s += e * e;
        }
        return s / (2.0 * l1->quad);
    }
    if (const auto* q = as<QuadraticPlusLinear>()) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double d = p[i] - q->shift[i];
            s += d * d;
        }
        return 0.5 * s;
    }
    if (const auto* ind = as<IndicatorInfBallPlusLinear>()) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double d = ind->linear.empty() ? p[i] : p[i] - ind->linear[i];
            s += std::fabs(d);
        }
        return ind->radius * s;
    }
    if (const auto* sb = as<SeparableBlocks>()) {
        double v = 0.0;
        std::size_t off = 0;
        for (std::size_t i = 0; i < sb->parts.size(); ++i) {
            Vec blk(p.begin() + off, p.begin() + off + sb->dims[i]);
            const double pv = sb->parts[i]->conjugate(blk);
            if (std::isinf(pv)) return kInf;
            v += pv;
            off += sb->dims[i];
        }
        return v;
    }
    throw UnsupportedFunction(
        "conjugate of weight*||B x||_1 has no closed form; use the dual-witness path");
}

}  // namespace grpdal
