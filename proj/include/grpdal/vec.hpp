#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace grpdal {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double nrm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double nrm1(const Vec& a) {
    double s = 0.0;
    for (double v : a) s += std::fabs(v);
    return s;
}

inline double nrm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

// y += alpha * x
inline void axpy(double alpha, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scal(double alpha, Vec& x) {
    for (double& v : x) v *= alpha;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec scaled(const Vec& a, double alpha) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = alpha * a[i];
    return r;
}

inline double sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace grpdal
