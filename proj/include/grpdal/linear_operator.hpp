#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "grpdal/metric.hpp"
#include "grpdal/vec.hpp"

namespace grpdal {

/// Bounded linear coupling map with an exact adjoint.  Four kinds cover the
/// benchmark problems: a dense matrix, an averaging blur (replicate padding),
/// the forward-difference image gradient (last row/column difference is 0),
/// and a scaled vertical stack of sub-operators.
class LinearOperator {
  public:
    struct Dense {
        std::size_t rows = 0, cols = 0;
        Vec a;  // row-major
    };
    struct Blur {
        std::size_t h = 0, w = 0;
        int half = 4;  // window = 2*half+1
    };
    struct Gradient {
        std::size_t h = 0, w = 0;  // input h*w, output 2*h*w (dy block, dx block)
    };
    struct Stack {
        std::vector<std::pair<double, std::shared_ptr<const LinearOperator>>> parts;
    };

    static LinearOperator dense(std::size_t rows, std::size_t cols, Vec entries);
    static LinearOperator identity(std::size_t n);
    static LinearOperator averaging_blur(std::size_t h, std::size_t w, int window);
    static LinearOperator forward_gradient(std::size_t h, std::size_t w);
    static LinearOperator stack(std::vector<std::pair<double, LinearOperator>> parts);
    static LinearOperator zero(std::size_t rows, std::size_t cols);

    std::size_t input_dim() const { return in_; }
    std::size_t output_dim() const { return out_; }

    Vec apply(const Vec& x) const;
    Vec adjoint_apply(const Vec& y) const;

    const Dense* as_dense() const { return std::get_if<Dense>(&payload_); }

  private:
    LinearOperator() = default;
    std::size_t in_ = 0, out_ = 0;
    std::variant<Dense, Blur, Gradient, Stack> payload_;
};

inline Vec apply(const LinearOperator& op, const Vec& x) { return op.apply(x); }
inline Vec adjoint_apply(const LinearOperator& op, const Vec& y) { return op.adjoint_apply(y); }

/// Power-iteration estimate of L = sup_y sqrt(lambda_min(T))*||A* y|| / ||y||_T,
/// the constant with N(A* dy) <= L ||dy||_T used by the linesearch theory.
/// For T = identity this is the spectral norm of A.  Monotone nondecreasing
/// in iters up to roundoff; returns 0 for the zero operator.
double operator_norm_in_metric(const LinearOperator& a, const Metric& t,
                               int iters, std::uint64_t seed);

}  // namespace grpdal
