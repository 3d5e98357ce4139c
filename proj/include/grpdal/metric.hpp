#pragma once

#include <algorithm>
#include <string>

#include "grpdal/error.hpp"
#include "grpdal/vec.hpp"

namespace grpdal {

/// Diagonal SPD metric D. Weighted norms satisfy
/// sqrt(lambda)*||v|| <= ||v||_D <= sqrt(Lambda)*||v||.
class Metric {
  public:
    Metric() = default;

    explicit Metric(Vec diagonal) : diag_(std::move(diagonal)) {
        if (diag_.empty()) throw InvalidArgument("Metric: empty diagonal");
        lambda_ = diag_[0];
        big_lambda_ = diag_[0];
        for (double d : diag_) {
            if (!(d > 0.0)) throw InvalidArgument("Metric: diagonal entries must be > 0");
            lambda_ = std::min(lambda_, d);
            big_lambda_ = std::max(big_lambda_, d);
        }
    }

    static Metric identity(std::size_t n) { return Metric(Vec(n, 1.0)); }
    static Metric uniform(std::size_t n, double w) { return Metric(Vec(n, w)); }

    std::size_t dim() const { return diag_.size(); }
    const Vec& diagonal() const { return diag_; }
    double lambda_min() const { return lambda_; }
    double lambda_max() const { return big_lambda_; }

    void check_dim(const Vec& v, const char* who) const {
        if (v.size() != diag_.size())
            throw InvalidArgument(std::string(who) + ": dimension mismatch (" +
                                  std::to_string(v.size()) + " vs metric " +
                                  std::to_string(diag_.size()) + ")");
    }

    Vec apply(const Vec& v) const {
        check_dim(v, "Metric::apply");
        Vec r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = diag_[i] * v[i];
        return r;
    }

    Vec apply_inv(const Vec& v) const {
        check_dim(v, "Metric::apply_inv");
        Vec r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / diag_[i];
        return r;
    }

    double inner(const Vec& u, const Vec& v) const {
        check_dim(u, "Metric::inner");
        check_dim(v, "Metric::inner");
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * diag_[i] * v[i];
        return s;
    }

    double norm(const Vec& v) const { return std::sqrt(inner(v, v)); }

  private:
    Vec diag_;
    double lambda_ = 1.0;
    double big_lambda_ = 1.0;
};

inline double weighted_inner(const Metric& m, const Vec& u, const Vec& v) {
    return m.inner(u, v);
}

inline double weighted_norm(const Metric& m, const Vec& v) { return m.norm(v); }

}  // namespace grpdal
