#include "istail/weighted_edf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "istail/stats.hpp"

namespace istail {

WeightedTailEdf WeightedTailEdf::build(const WeightedSampleSet& samples) {
    if (samples.empty()) throw std::invalid_argument("WeightedTailEdf: empty sample set");

    std::vector<WeightedSample> sorted(samples);
    for (const auto& ws : sorted) {
        if (!(ws.weight > 0.0) || !std::isfinite(ws.weight))
            throw std::invalid_argument("WeightedTailEdf: weights must be positive and finite");
        if (!std::isfinite(ws.value))
            throw std::invalid_argument("WeightedTailEdf: values must be finite");
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const WeightedSample& a, const WeightedSample& b) { return a.value < b.value; });

    WeightedTailEdf edf;
    edf.n_ = sorted.size();

    std::vector<double> point_weight;
    for (const auto& ws : sorted) {
        if (edf.points_.empty() || ws.value != edf.points_.back()) {
            edf.points_.push_back(ws.value);
            point_weight.push_back(ws.weight);
        } else {
            point_weight.back() += ws.weight;
        }
    }

    // Suffix sums of raw weights; each entry is divided by N only once so
    // that unit weights give exact ratios of counts.
    const std::size_t m = edf.points_.size();
    const double n = static_cast<double>(edf.n_);
    edf.tail_mass_.assign(m, 0.0);
    double suffix = 0.0;
    for (std::size_t k = m; k-- > 0;) {
        edf.tail_mass_[k] = suffix / n;
        suffix += point_weight[k];
    }
    edf.total_mass_ = suffix / n;
    return edf;
}

double WeightedTailEdf::tail(double t) const noexcept {
    // First point strictly above t bounds the mass from below.
    auto it = std::upper_bound(points_.begin(), points_.end(), t);
    if (it == points_.begin()) return total_mass_;
    const std::size_t k = static_cast<std::size_t>(it - points_.begin()) - 1;
    return tail_mass_[k];
}

QuantileResult WeightedTailEdf::var_estimate(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("WeightedTailEdf::var_estimate: p must be in (0,1)");
    const double level = 1.0 - p;
    if (total_mass_ <= level) return {points_.front(), true};
    // tail_mass_ is non-increasing; find the first index at or below level.
    const std::size_t m = points_.size();
    std::size_t lo = 0, hi = m - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (tail_mass_[mid] <= level)
            hi = mid;
        else
            lo = mid + 1;
    }
    return {points_[lo], false};
}

QuantileResult WeightedTailEdf::es_estimate(double p) const {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("WeightedTailEdf::es_estimate: p must be in (0,1)");
    const bool deficit = total_mass_ <= 1.0 - p;

    // The quantile function is the step function u -> points_[k] on
    // (C_{k-1}, C_k] with C_k = 1 - tail_mass_[k]; integrate it exactly
    // over (p, 1).  Mass below the smallest sample (C_0 region) clamps to
    // points_[0].
    double acc = 0.0;
    double c_prev = 1.0 - total_mass_;
    if (c_prev > p) acc += points_.front() * (c_prev - p);
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const double c_k = 1.0 - tail_mass_[k];
        const double lo = std::max(c_prev, p);
        if (c_k > lo) acc += points_[k] * (c_k - lo);
        c_prev = c_k;
    }
    return {acc / (1.0 - p), deficit};
}

RiskEstimate WeightedTailEdf::risk_estimate(double p) const {
    const QuantileResult v = var_estimate(p);
    const QuantileResult e = es_estimate(p);
    return {p, v.value, e.value, v.mass_deficit || e.mass_deficit};
}

void WeightedTailEdf::write_csv(std::ostream& out) const {
    out << "value,tail_mass\n";
    char buf[64];
    for (std::size_t k = 0; k < points_.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", points_[k], tail_mass_[k]);
        out << buf;
    }
}

double empirical_rho(const WeightedSampleSet& samples,
                     const std::function<double(double)>& tail_fn, double x, double y) {
    if (samples.empty()) throw std::invalid_argument("empirical_rho: empty sample set");
    const double threshold = std::max(x, y);
    RunningStats moment;
    for (const auto& ws : samples)
        moment.add(ws.value > threshold ? ws.weight * ws.weight : 0.0);
    return moment.mean() - tail_fn(x) * tail_fn(y);
}

double second_moment_ratio(const WeightedSampleSet& samples, double c, double lambda,
                           const std::function<double(double)>& tail_fn) {
    if (samples.empty()) throw std::invalid_argument("second_moment_ratio: empty sample set");
    const double threshold = c * lambda;
    RunningStats moment;
    for (const auto& ws : samples)
        moment.add(ws.value > threshold ? ws.weight * ws.weight : 0.0);
    const double t = tail_fn(lambda);
    return moment.mean() / (t * t);
}

double max_scaled_weight(const WeightedSampleSet& samples, double c, double lambda,
                         const HeavyTailDistribution& d) {
    if (samples.empty()) throw std::invalid_argument("max_scaled_weight: empty sample set");
    const double threshold = c * lambda;
    double max_w = 0.0;
    for (const auto& ws : samples)
        if (ws.value > threshold && ws.weight > max_w) max_w = ws.weight;
    return max_w / d.tail(lambda);
}

}  // namespace istail
