#include "grpdal/linear_operator.hpp"

#include <random>
#include <string>

#include "grpdal/error.hpp"

namespace grpdal {

namespace {

void check_size(std::size_t got, std::size_t want, const char* who) {
    if (got != want)
        throw InvalidArgument(std::string(who) + ": dimension mismatch (" +
                              std::to_string(got) + " vs " + std::to_string(want) + ")");
}

inline std::size_t clampi(long i, long n) {
    if (i < 0) return 0;
    if (i >= n) return static_cast<std::size_t>(n - 1);
    return static_cast<std::size_t>(i);
}

}  // namespace

LinearOperator LinearOperator::dense(std::size_t rows, std::size_t cols, Vec entries) {
    if (entries.size() != rows * cols)
        throw InvalidArgument("dense: entry count != rows*cols");
    LinearOperator op;
    op.in_ = cols;
    op.out_ = rows;
    op.payload_ = Dense{rows, cols, std::move(entries)};
    return op;
}

LinearOperator LinearOperator::identity(std::size_t n) {
    Vec a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1.0;
    return dense(n, n, std::move(a));
}

LinearOperator LinearOperator::zero(std::size_t rows, std::size_t cols) {
    return dense(rows, cols, Vec(rows * cols, 0.0));
}

LinearOperator LinearOperator::averaging_blur(std::size_t h, std::size_t w, int window) {
    if (window < 1 || window % 2 == 0)
        throw InvalidArgument("averaging_blur: window must be odd and >= 1");
    if (h < 2 || w < 2) throw InvalidArgument("averaging_blur: image must be >= 2x2");
    LinearOperator op;
    op.in_ = h * w;
    op.out_ = h * w;
    op.payload_ = Blur{h, w, window / 2};
    return op;
}

LinearOperator LinearOperator::forward_gradient(std::size_t h, std::size_t w) {
    if (h < 2 || w < 2) throw InvalidArgument("forward_gradient: image must be >= 2x2");
    LinearOperator op;
    op.in_ = h * w;
    op.out_ = 2 * h * w;
    op.payload_ = Gradient{h, w};
    return op;
}

LinearOperator LinearOperator::stack(std::vector<std::pair<double, LinearOperator>> parts) {
    if (parts.empty()) throw InvalidArgument("stack: no parts");
    LinearOperator op;
    Stack st;
    op.in_ = parts.front().second.input_dim();
    op.out_ = 0;
    for (auto& [scale, sub] : parts) {
        if (sub.input_dim() != op.in_)
            throw InvalidArgument("stack: parts must share the input dimension");
        op.out_ += sub.output_dim();
        st.parts.emplace_back(scale, std::make_shared<const LinearOperator>(std::move(sub)));
    }
    op.payload_ = std::move(st);
    return op;
}

Vec LinearOperator::apply(const Vec& x) const {
    check_size(x.size(), in_, "LinearOperator::apply");
    Vec y(out_, 0.0);
    if (const auto* d = std::get_if<Dense>(&payload_)) {
        for (std::size_t i = 0; i < d->rows; ++i) {
            double s = 0.0;
            const double* row = d->a.data() + i * d->cols;
            for (std::size_t j = 0; j < d->cols; ++j) s += row[j] * x[j];
            y[i] = s;
        }
    } else if (const auto* bl = std::get_if<Blur>(&payload_)) {
        const long h = static_cast<long>(bl->h), w = static_cast<long>(bl->w);
        const int k = bl->half;
        const double inv = 1.0 / ((2 * k + 1) * (2 * k + 1));
        // separable mean with replicate padding: rows then columns
        Vec tmp(bl->h * bl->w, 0.0);
        for (long i = 0; i < h; ++i)
            for (long j = 0; j < w; ++j) {
                double s = 0.0;
                for (int dj = -k; dj <= k; ++dj) s += x[i * w + clampi(j + dj, w)];
                tmp[i * w + j] = s;
            }
        for (long i = 0; i < h; ++i)
            for (long j = 0; j < w; ++j) {
                double s = 0.0;
                for (int di = -k; di <= k; ++di) s += tmp[clampi(i + di, h) * w + j];
                y[i * w + j] = s * inv;
            }
    } else if (const auto* g = std::get_if<Gradient>(&payload_)) {
        const long h = static_cast<long>(g->h), w = static_cast<long>(g->w);
        for (long i = 0; i + 1 < h; ++i)
            for (long j = 0; j < w; ++j)
                y[i * w + j] = x[(i + 1) * w + j] - x[i * w + j];
        const std::size_t off = g->h * g->w;
        for (long i = 0; i < h; ++i)
            for (long j = 0; j + 1 < w; ++j)
                y[off + i * w + j] = x[i * w + j + 1] - x[i * w + j];
    } else {
        const auto& st = std::get<Stack>(payload_);
        std::size_t off = 0;
        for (const auto& [scale, sub] : st.parts) {
            Vec part = sub->apply(x);
            for (std::size_t i = 0; i < part.size(); ++i) y[off + i] = scale * part[i];
            off += part.size();
        }
    }
    return y;
}

Vec LinearOperator::adjoint_apply(const Vec& yin) const {
    check_size(yin.size(), out_, "LinearOperator::adjoint_apply");
    Vec x(in_, 0.0);
    if (const auto* d = std::get_if<Dense>(&payload_)) {
        for (std::size_t i = 0; i < d->rows; ++i) {
            const double yi = yin[i];
            const double* row = d->a.data() + i * d->cols;
            for (std::size_t j = 0; j < d->cols; ++j) x[j] += row[j] * yi;
        }
    } else if (const auto* bl = std::get_if<Blur>(&payload_)) {
        const long h = static_cast<long>(bl->h), w = static_cast<long>(bl->w);
        const int k = bl->half;
        const double inv = 1.0 / ((2 * k + 1) * (2 * k + 1));
        // adjoint of clamp-indexing: scatter columns then rows
        Vec tmp(bl->h * bl->w, 0.0);
        for (long i = 0; i < h; ++i)
            for (long j = 0; j < w; ++j) {
                const double v = yin[i * w + j];
                for (int di = -k; di <= k; ++di) tmp[clampi(i + di, h) * w + j] += v;
            }
        for (long i = 0; i < h; ++i)
            for (long j = 0; j < w; ++j) {
                const double v = tmp[i * w + j];
                for (int dj = -k; dj <= k; ++dj) x[i * w + clampi(j + dj, w)] += v * inv;
            }
    } else if (const auto* g = std::get_if<Gradient>(&payload_)) {
        const long h = static_cast<long>(g->h), w = static_cast<long>(g->w);
        for (long i = 0; i + 1 < h; ++i)
            for (long j = 0; j < w; ++j) {
                const double v = yin[i * w + j];
                x[(i + 1) * w + j] += v;
                x[i * w + j] -= v;
            }
        const std::size_t off = g->h * g->w;
        for (long i = 0; i < h; ++i)
            for (long j = 0; j + 1 < w; ++j) {
                const double v = yin[off + i * w + j];
                x[i * w + j + 1] += v;
                x[i * w + j] -= v;
            }
    } else {
        const auto& st = std::get<Stack>(payload_);
        std::size_t off = 0;
        for (const auto& [scale, sub] : st.parts) {
            Vec part(yin.begin() + off, yin.begin() + off + sub->output_dim());
            Vec back = sub->adjoint_apply(part);
            axpy(scale, back, x);
            off += sub->output_dim();
        }
    }
    return x;
}

double operator_norm_in_metric(const LinearOperator& a, const Metric& t,
                               int iters, std::uint64_t seed) {
    if (iters < 1) throw InvalidArgument("operator_norm_in_metric: iters >= 1 required");
    if (t.dim() != a.output_dim())
        throw InvalidArgument("operator_norm_in_metric: metric must live on the output space of A");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(a.output_dim());
    for (double& e : v) e = gauss(rng);
    const double n0 = nrm2(v);
    if (n0 == 0.0) return 0.0;
    scal(1.0 / n0, v);

    // power iteration on M = T^{-1/2} A A* T^{-1/2}, symmetric PSD
    auto apply_m = [&](const Vec& u) {
        Vec s(u.size());
        const Vec& d = t.diagonal();
        for (std::size_t i = 0; i < u.size(); ++i) s[i] = u[i] / std::sqrt(d[i]);
        Vec w = a.apply(a.adjoint_apply(s));
        for (std::size_t i = 0; i < w.size(); ++i) w[i] /= std::sqrt(d[i]);
        return w;
    };

    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        Vec mv = apply_m(v);
        lam = dot(v, mv);
        const double n = nrm2(mv);
        if (n == 0.0) return 0.0;
        scal(1.0 / n, mv);
        v = std::move(mv);
    }
    if (lam < 0.0) lam = 0.0;
    return std::sqrt(lam) * std::sqrt(t.lambda_min());
}

}  // namespace grpdal
