#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "istail/distribution.hpp"
#include "istail/sampler.hpp"

namespace istail {

/// Quantile-type estimate plus a flag for the degenerate case where the
/// importance weights carry less total mass than the requested tail level.
struct QuantileResult {
    double value = 0.0;
    bool mass_deficit = false;
};

struct RiskEstimate {
    double level_p = 0.0;
    double var_p = 0.0;
    double es_p = 0.0;
    bool mass_deficit = false;
};

/// Weighted tail empirical distribution function over a weighted sample set.
///
/// T(t) = (1/N) sum_i w_i 1{x_i > t} with N the total number of samples
/// (not the number of distinct values).  The estimator uses a strict
/// inequality, so T is right-continuous-from-above in the sense that
/// T(x_k) excludes the mass sitting exactly at x_k.
class WeightedTailEdf {
public:
    /// Sorts and aggregates; ties are merged.  Throws std::invalid_argument
    /// on an empty set or a non-positive weight.
    static WeightedTailEdf build(const WeightedSampleSet& samples);

    std::size_t sample_count() const noexcept { return n_; }

    /// Distinct sample values, ascending.
    const std::vector<double>& points() const noexcept { return points_; }

    /// tail_mass()[k] = T(points()[k]): weight strictly above points()[k],
    /// divided by N.  Non-increasing, ends at 0.
    const std::vector<double>& tail_mass() const noexcept { return tail_mass_; }

    /// T(-inf) = (sum of all weights) / N.
    double total_mass() const noexcept { return total_mass_; }

    /// T(t) for arbitrary t.
    double tail(double t) const noexcept;

    /// Smallest sample value whose tail mass has dropped to 1-p or below.
    /// If even the total mass is <= 1-p the estimate clamps to the smallest
    /// sample value and the mass_deficit flag is set.
    QuantileResult var_estimate(double p) const;

    /// Mean of the quantile function over (p, 1), integrated exactly over
    /// the steps of the weighted e.d.f.  Under a mass deficit the quantile
    /// function is clamped at the smallest sample value on the deficient
    /// part of the range and the flag is set.
    QuantileResult es_estimate(double p) const;

    RiskEstimate risk_estimate(double p) const;

    /// Two columns, value and tail_mass, one row per distinct value.
    void write_csv(std::ostream& out) const;

private:
    std::size_t n_ = 0;
    double total_mass_ = 0.0;
    std::vector<double> points_;
    std::vector<double> tail_mass_;
};

/// Empirical covariance-style diagnostic
///   rho(x,y) = (1/N) sum_i w_i^2 1{x_i > max(x,y)} - tail_fn(x) tail_fn(y),
/// where tail_fn approximates the true tail of the walk.  Near zero when the
/// change of measure keeps second moments under control.
double empirical_rho(const WeightedSampleSet& samples,
                     const std::function<double(double)>& tail_fn, double x, double y);

/// Normalized second moment (1/N) sum_i w_i^2 1{x_i > c*lambda} / tail_fn(lambda)^2.
/// Comparable against the algorithm's asymptotic efficiency bound phi(c).
double second_moment_ratio(const WeightedSampleSet& samples, double c, double lambda,
                           const std::function<double(double)>& tail_fn);

/// Largest weight among samples beyond c*lambda, scaled by the increment
/// tail at lambda.  A runaway value signals weight degeneracy.
double max_scaled_weight(const WeightedSampleSet& samples, double c, double lambda,
                         const HeavyTailDistribution& d);

}  // namespace istail
