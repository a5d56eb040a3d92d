#pragma once

#include <optional>
#include <span>

#include "istail/distribution.hpp"
#include "istail/sampler.hpp"

namespace istail {

/// Everything the large-deviation approximations need to know about an
/// experiment: the increment law, the walk length, and the mixture
/// parameters of the algorithm under study.
struct AsymptoticContext {
    HeavyTailDistribution dist;
    int n = 1;
    MixtureConfig mix;
};

/// First-order tail of the walk: U(x) = min(1, n * tail(x)).  Exact for
/// n = 1 and asymptotically sharp as x grows (single big jump).
double tail_approx_U(const AsymptoticContext& ctx, double x);

/// Inverse of U at level p: the asymptotic quantile (n/(1-p))^(1/alpha) - 1
/// for the shifted Pareto law.  Underestimates the true quantile at any
/// finite level, which is what makes it a safe anchor for the change of
/// measure.  Throws std::domain_error for p outside (0,1).
double asymptotic_quantile(const AsymptoticContext& ctx, double p);
double asymptotic_quantile(double alpha, int n, double p);

/// Limit of the normalized second moment of the conditional-mixture
/// estimator on {S_n > c*lambda}:
///   phi(c) = c^(-alpha) (a^(-alpha) sum_{i<n} [prod_{j<i} 1/p_j] / q_i
///            + prod_{j<n} 1/p_j).
double phi_conditional(const AsymptoticContext& ctx, double c);

/// Second-moment functional of the scaling mixture at level lambda,
///   phi(c) = sum_{i<=n} [prod_{j<i} 1/p_j] / q_i * I(c, lambda),  q_n = 1,
/// where I integrates the squared likelihood ratio of a scaled big jump
/// beyond c.  Unlike the conditional-mixture phi this keeps an explicit
/// lambda dependence.  Throws std::runtime_error if the quadrature fails
/// to converge and std::domain_error on invalid c or lambda.
double phi_scaling(const AsymptoticContext& ctx, double c, double lambda);

/// Asymptotic bound on N * Var(quantile estimate) / quantile^2 implied by
/// phi(1) for the context's algorithm: (phi(1) - 1) / alpha^2.  Throws
/// std::domain_error for StandardMC, whose phi is unbounded.
double var_ratio_bound(const AsymptoticContext& ctx);

/// Asymptotic bound on the expected-shortfall variance ratio,
///   ((2 K (alpha-1) / (alpha-2)) - 1) / alpha^2,
/// finite only for alpha > 2; throws std::domain_error otherwise.
double es_ratio_bound(double alpha, double K);

/// Sample relative error: stddev (divisor n-1) over mean.  Empty optional
/// when the mean is exactly zero; throws std::invalid_argument for fewer
/// than two values.
std::optional<double> relative_error(std::span<const double> estimates);

}  // namespace istail
