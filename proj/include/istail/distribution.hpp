#pragma once

#include <cmath>
#include <stdexcept>

#include "istail/random.hpp"

namespace istail {

/// Increment law with a regularly varying right tail.
///
/// ParetoShifted is the law with P(Z > x) = (1+x)^(-alpha) on [0, inf).
/// By convention tail(x) = 1 and density(x) = 0 for x < 0, so conditioning
/// on exceeding a negative threshold degrades to the unconditional law and
/// callers never need to special-case thresholds left of the support.
class HeavyTailDistribution {
public:
    enum class Kind { ParetoShifted };

    HeavyTailDistribution(Kind kind, double alpha)
        : kind_(kind), alpha_(alpha), inv_alpha_(1.0 / alpha) {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("HeavyTailDistribution: alpha must be finite and > 0");
        // alpha = 2 and alpha = 3 dominate practical use; sqrt/cbrt beat pow
        // by a wide margin in the sampling hot loop.
        if (alpha == 2.0)
            cls_ = AlphaClass::Two;
        else if (alpha == 3.0)
            cls_ = AlphaClass::Three;
        else
            cls_ = AlphaClass::General;
    }

    static HeavyTailDistribution pareto(double alpha) {
        return HeavyTailDistribution(Kind::ParetoShifted, alpha);
    }

    Kind kind() const noexcept { return kind_; }
    double alpha() const noexcept { return alpha_; }

    /// P(Z > x); equals 1 left of the support, strictly decreasing on it.
    double tail(double x) const noexcept {
        if (x < 0.0) return 1.0;
        const double b = 1.0 + x;
        switch (cls_) {
            case AlphaClass::Two:   return 1.0 / (b * b);
            case AlphaClass::Three: return 1.0 / (b * b * b);
            default:                return std::pow(b, -alpha_);
        }
    }

    double density(double x) const noexcept {
        if (x < 0.0) return 0.0;
        const double b = 1.0 + x;
        switch (cls_) {
            case AlphaClass::Two:   return 2.0 / (b * b * b);
            case AlphaClass::Three: return 3.0 / ((b * b) * (b * b));
            default:                return alpha_ * std::pow(b, -(alpha_ + 1.0));
        }
    }

    /// Inverse of tail on (0,1]: the x >= 0 with tail(x) = q.
    double tail_inverse(double q) const noexcept {
        switch (cls_) {
            case AlphaClass::Two:   return 1.0 / std::sqrt(q) - 1.0;
            case AlphaClass::Three: return 1.0 / std::cbrt(q) - 1.0;
            default:                return std::pow(q, -inv_alpha_) - 1.0;
        }
    }

    /// x with P(Z <= x) = p.  Throws std::domain_error outside (0,1).
    double quantile(double p) const {
        if (!(p > 0.0 && p < 1.0))
            throw std::domain_error("HeavyTailDistribution::quantile: p must be in (0,1)");
        return tail_inverse(1.0 - p);
    }

    /// Inverse-transform draw; one uniform consumed per sample.
    template <UniformSource S>
    double sample(S& stream) const {
        return tail_inverse(1.0 - stream.uniform());
    }

private:
    enum class AlphaClass { Two, Three, General };

    Kind kind_;
    double alpha_;
    double inv_alpha_;
    AlphaClass cls_;
};

}  // namespace istail
