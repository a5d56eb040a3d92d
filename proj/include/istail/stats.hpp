#pragma once

#include <cmath>
#include <cstddef>

namespace istail {

/// Welford running mean/variance.
///
/// The update keeps the mean of a constant sequence bitwise equal to that
/// constant and its M2 term exactly zero, which the degenerate zero-variance
/// checks rely on; it is also the numerically stable choice for long sums.
class RunningStats {
public:
    void add(double x) noexcept {
        ++count_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(count_);
        m2_ += d * (x - mean_);
    }

    std::size_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }

    /// Sample variance, divisor count-1; zero for fewer than two values.
    double variance() const noexcept {
        return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
    }

    double stddev() const noexcept { return std::sqrt(variance()); }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace istail
