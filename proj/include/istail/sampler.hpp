#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "istail/distribution.hpp"
#include "istail/random.hpp"

namespace istail {

enum class Algorithm { StandardMC, ConditionalMixture, ScalingMixture };

const char* algorithm_name(Algorithm a) noexcept;

/// Invalid sampler or experiment configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters of the change of measure for one random-walk experiment.
///
/// mix_p[i] is the probability of drawing step i+1 from the original density
/// rather than the twisted one; it has one entry per non-final step.  The
/// final step is always twisted (subject to the algorithm's own gating), so
/// mix_p.size() == n-1.
struct MixtureConfig {
    Algorithm algorithm = Algorithm::StandardMC;
    int n = 1;                  // number of random-walk steps
    double lambda = 0.0;        // rare-event level anchoring the change of measure
    double a = 0.5;             // big-jump threshold fraction
    double sigma = 1.0;         // jump scale factor (ScalingMixture only)
    std::vector<double> mix_p;  // original-density probabilities, size n-1

    static MixtureConfig standard_mc(int n) {
        MixtureConfig c;
        c.algorithm = Algorithm::StandardMC;
        c.n = n;
        return c;
    }

    static MixtureConfig conditional(int n, double lambda, double a = 0.5, double p = 0.5) {
        MixtureConfig c;
        c.algorithm = Algorithm::ConditionalMixture;
        c.n = n;
        c.lambda = lambda;
        c.a = a;
        c.mix_p.assign(n > 0 ? n - 1 : 0, p);
        return c;
    }

    static MixtureConfig scaling(int n, double lambda, double a = 0.5, double sigma = 1.0,
                                 double p = 0.5) {
        MixtureConfig c;
        c.algorithm = Algorithm::ScalingMixture;
        c.n = n;
        c.lambda = lambda;
        c.a = a;
        c.sigma = sigma;
        c.mix_p.assign(n > 0 ? n - 1 : 0, p);
        return c;
    }

    void validate() const {
        if (n < 1) throw ConfigError("MixtureConfig: n must be >= 1");
        if (algorithm == Algorithm::StandardMC) return;
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw ConfigError("MixtureConfig: lambda must be finite and > 0");
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("MixtureConfig: a must be in (0,1)");
        if (algorithm == Algorithm::ScalingMixture && !(sigma > 0.0))
            throw ConfigError("MixtureConfig: sigma must be > 0");
        if (static_cast<int>(mix_p.size()) != n - 1)
            throw ConfigError("MixtureConfig: mix_p must have exactly n-1 entries");
        for (double p : mix_p)
            if (!(p > 0.0 && p < 1.0))
                throw ConfigError("MixtureConfig: mix_p entries must be in (0,1)");
    }
};

/// One realized random-walk sum and its path likelihood ratio.
struct WeightedSample {
    double value;
    double weight;
};

using WeightedSampleSet = std::vector<WeightedSample>;

namespace detail {

/// Product of per-step likelihood-ratio factors.
///
/// The running product is kept as a plain double while it stays in normal
/// range, so typical weights are exact products of their factors; only paths
/// whose weight would leave the representable range trigger a power-of-two
/// rescale, which is itself exact.  A weight that still underflows after
/// unshifting is reported as the smallest positive double rather than zero,
/// so importance weights are always strictly positive.
class WeightAccumulator {
public:
    void multiply(double factor) noexcept {
        w_ *= factor;
        if (w_ > 0.0 && w_ < 0x1p-512) {
            w_ = std::ldexp(w_, 512);
            shift_ -= 512;
        }
    }

    double value() const noexcept {
        if (shift_ == 0) return w_;
        const double v = std::ldexp(w_, shift_);
        return v > 0.0 ? v : std::numeric_limits<double>::denorm_min();
    }

private:
    double w_ = 1.0;
    int shift_ = 0;
};

/// Draw from f_Z conditioned on exceeding t via inverse transform; for
/// t <= 0 the condition is vacuous (tail(t) = 1) and this reduces to the
/// same plain draw the unconditional path would produce from u.
inline double conditional_exceedance_draw(const HeavyTailDistribution& d, double t, double u) {
    return d.tail_inverse((1.0 - u) * d.tail(t));
}

/// Density ratio g(z)/f_Z(z) of the scaled positive part against the
/// original law, for z > 0, where g rescales positive draws by s.
inline double scaled_density_ratio(const HeavyTailDistribution& d, double z, double s) {
    return d.density(z / s) / (s * d.density(z));
}

}  // namespace detail

/// Plain Monte Carlo random walk: n iid increments, weight identically 1.
template <UniformSource S>
WeightedSample sample_standard(const HeavyTailDistribution& d, int n, S& stream) {
    if (n < 1) throw ConfigError("sample_standard: n must be >= 1");
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += d.sample(stream);
    return {sum, 1.0};
}

/// Dynamic mixture with a conditioned big-jump component.
///
/// While the partial sum s is at or below lambda, step i draws from
/// p_i f_Z + q_i g_i with g_i the law of Z given Z > a(lambda - s); once
/// s > lambda the remaining non-final steps fall back to f_Z with factor 1.
/// The final step conditions on exceeding the full remaining distance
/// lambda - s, which for s > lambda is a negative threshold and again
/// reduces to f_Z with factor 1.
///
/// Stream layout is fixed: every non-final step consumes a branch uniform
/// then an increment uniform, and the final step consumes one increment
/// uniform, regardless of the path taken.
template <UniformSource S>
WeightedSample sample_conditional_mixture(const HeavyTailDistribution& d,
                                          const MixtureConfig& cfg, S& stream) {
    cfg.validate();
    if (cfg.algorithm != Algorithm::ConditionalMixture)
        throw ConfigError("sample_conditional_mixture: config built for a different algorithm");

    double s = 0.0;
    detail::WeightAccumulator w;
    for (int i = 0; i + 1 < cfg.n; ++i) {
        const double ub = stream.uniform();
        const double ui = stream.uniform();
        if (s > cfg.lambda) {
            s += d.tail_inverse(1.0 - ui);
            continue;
        }
        const double t = cfg.a * (cfg.lambda - s);
        const double ft = d.tail(t);
        const double pi = cfg.mix_p[static_cast<std::size_t>(i)];
        const double qi = 1.0 - pi;
        const double z = (ub < pi) ? d.tail_inverse(1.0 - ui)
                                   : detail::conditional_exceedance_draw(d, t, ui);
        // Mixture density is p f + q f/tail(t) above t and p f below it.
        w.multiply(z > t ? ft / (pi * ft + qi) : 1.0 / pi);
        s += z;
    }
    const double t = cfg.lambda - s;
    const double ft = d.tail(t);
    const double z = detail::conditional_exceedance_draw(d, t, stream.uniform());
    w.multiply(ft);
    s += z;
    return {s, w.value()};
}

/// Dynamic mixture whose big-jump component rescales positive draws by
/// sigma * lambda.
///
/// Non-final steps mix p_i f_Z with the scaled law while s <= lambda and
/// fall back to f_Z afterwards.  The final step draws from the scaled law
/// outright, but only when the partial sum lies inside the gate
/// s <= lambda (1 - (1-a)^(n-1)); outside it the final increment comes from
/// f_Z with factor 1.  Stream layout matches the conditional mixture.
template <UniformSource S>
WeightedSample sample_scaling_mixture(const HeavyTailDistribution& d, const MixtureConfig& cfg,
                                      S& stream) {
    cfg.validate();
    if (cfg.algorithm != Algorithm::ScalingMixture)
        throw ConfigError("sample_scaling_mixture: config built for a different algorithm");

    const double sl = cfg.sigma * cfg.lambda;
    double s = 0.0;
    detail::WeightAccumulator w;
    for (int i = 0; i + 1 < cfg.n; ++i) {
        const double ub = stream.uniform();
        const double ui = stream.uniform();
        const double zf = d.tail_inverse(1.0 - ui);
        if (s > cfg.lambda) {
            s += zf;
            continue;
        }
        const double pi = cfg.mix_p[static_cast<std::size_t>(i)];
        const double qi = 1.0 - pi;
        const double z = (ub < pi || zf <= 0.0) ? zf : sl * zf;
        // Below 0 the scaled and original densities coincide, factor 1.
        if (z > 0.0) w.multiply(1.0 / (pi + qi * detail::scaled_density_ratio(d, z, sl)));
        s += z;
    }
    const double gate = cfg.lambda * (1.0 - std::pow(1.0 - cfg.a, cfg.n - 1));
    const double zf = d.tail_inverse(1.0 - stream.uniform());
    double z = zf;
    if (s <= gate && zf > 0.0) {
        z = sl * zf;
        w.multiply(1.0 / detail::scaled_density_ratio(d, z, sl));
    }
    s += z;
    return {s, w.value()};
}

/// Dispatch on cfg.algorithm.
template <UniformSource S>
WeightedSample draw_sample(const HeavyTailDistribution& d, const MixtureConfig& cfg, S& stream) {
    switch (cfg.algorithm) {
        case Algorithm::StandardMC:         return sample_standard(d, cfg.n, stream);
        case Algorithm::ConditionalMixture: return sample_conditional_mixture(d, cfg, stream);
        case Algorithm::ScalingMixture:     return sample_scaling_mixture(d, cfg, stream);
    }
    throw ConfigError("draw_sample: unknown algorithm");
}

/// count iid draws from one stream, in stream order.
template <UniformSource S>
WeightedSampleSet batch(const HeavyTailDistribution& d, const MixtureConfig& cfg,
                        std::size_t count, S& stream) {
    if (count < 1) throw ConfigError("batch: count must be >= 1");
    cfg.validate();
    WeightedSampleSet out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(draw_sample(d, cfg, stream));
    return out;
}

}  // namespace istail
