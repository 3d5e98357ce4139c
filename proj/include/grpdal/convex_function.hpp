#pragma once

#include <limits>
#include <memory>
#include <variant>
#include <vector>

#include "grpdal/linear_operator.hpp"
#include "grpdal/vec.hpp"

namespace grpdal {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Proper l.s.c. convex function given by one of the closed-form descriptors
/// used by the benchmark problems.  Values are +inf outside the domain; the
/// infinite marker is explicit, never a sentinel.
class ConvexFunction {
  public:
    /// weight*||x||_1 + (quad/2)*||x||^2 ; quad >= 0, quad-strongly convex.
    struct ScaledL1 {
        double weight = 1.0;
        double quad = 0.0;
    };
    /// 0.5*||x||^2 + <shift, x> ; 1-strongly convex.
    struct QuadraticPlusLinear {
        Vec shift;
    };
    /// indicator of {||x||_inf <= radius} plus <linear, x> (linear may be empty).
    struct IndicatorInfBallPlusLinear {
        double radius = 1.0;
        Vec linear;
    };
    /// concatenation of sub-functions over consecutive blocks.
    struct SeparableBlocks {
        std::vector<std::shared_ptr<const ConvexFunction>> parts;
        std::vector<std::size_t> dims;
    };
    /// weight*||B x||_1 for a linear operator B; no closed-form prox.
    struct L1OfOperator {
        double weight = 1.0;
        std::shared_ptr<const LinearOperator> op;
    };

    static ConvexFunction scaled_l1(std::size_t dim, double weight, double quad = 0.0);
    static ConvexFunction quadratic_plus_linear(Vec shift);
    static ConvexFunction indicator_inf_ball(std::size_t dim, double radius, Vec linear = {});
    static ConvexFunction separable_blocks(std::vector<ConvexFunction> parts);
    static ConvexFunction l1_of_operator(double weight, LinearOperator op);

    std::size_t dim() const { return dim_; }
    /// strong-convexity modulus (Eq.-style: f(y) >= f(x) + <u,y-x> + gamma/2 |y-x|^2)
    double gamma() const;

    /// pointwise value; +inf outside the domain.
    double value(const Vec& x) const;

    /// convex conjugate value; +inf where the conjugate is infinite.
    /// Unsupported for L1OfOperator (throws UnsupportedFunction).
    double conjugate(const Vec& p) const;

    template <typename T>
    const T* as() const {
        return std::get_if<T>(&payload_);
    }

    using Payload = std::variant<ScaledL1, QuadraticPlusLinear, IndicatorInfBallPlusLinear,
                                 SeparableBlocks, L1OfOperator>;
    const Payload& payload() const { return payload_; }

  private:
    ConvexFunction() = default;
    std::size_t dim_ = 0;
    Payload payload_;
};

}  // namespace grpdal
