#include "istail/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "istail/stats.hpp"

namespace istail {

double tail_approx_U(const AsymptoticContext& ctx, double x) {
    if (ctx.n < 1) throw std::invalid_argument("tail_approx_U: n must be >= 1");
    return std::min(1.0, static_cast<double>(ctx.n) * ctx.dist.tail(x));
}

double asymptotic_quantile(double alpha, int n, double p) {
    if (n < 1) throw std::invalid_argument("asymptotic_quantile: n must be >= 1");
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("asymptotic_quantile: p must be in (0,1)");
    return std::pow(static_cast<double>(n) / (1.0 - p), 1.0 / alpha) - 1.0;
}

double asymptotic_quantile(const AsymptoticContext& ctx, double p) {
    return asymptotic_quantile(ctx.dist.alpha(), ctx.n, p);
}

double phi_conditional(const AsymptoticContext& ctx, double c) {
    if (ctx.n < 1) throw std::invalid_argument("phi_conditional: n must be >= 1");
    if (!(c > 0.0)) throw std::domain_error("phi_conditional: c must be > 0");
    const double alpha = ctx.dist.alpha();
    double sum = 0.0;
    double prod = 1.0;  // prod_{j<i} 1/p_j
    for (int i = 1; i <= ctx.n - 1; ++i) {
        const double pi = ctx.mix.mix_p[static_cast<std::size_t>(i - 1)];
        sum += prod / (1.0 - pi);
        prod /= pi;
    }
    return std::pow(c, -alpha) * (std::pow(ctx.mix.a, -alpha) * sum + prod);
}

double phi_scaling(const AsymptoticContext& ctx, double c, double lambda) {
    if (ctx.n < 1) throw std::invalid_argument("phi_scaling: n must be >= 1");
    if (!(c > 0.0)) throw std::domain_error("phi_scaling: c must be > 0");
    if (!(lambda > 0.0)) throw std::domain_error("phi_scaling: lambda must be > 0");
    const double alpha = ctx.dist.alpha();

    // Squared likelihood ratio of a scaled big jump integrated beyond c.
    // For the shifted Pareto law the integrand reduces to
    //   alpha * lambda * y^(-2 alpha - 2) * (1 + y/lambda)^(alpha + 1).
    // Substituting y = c/t maps the range onto (0,1] with an integrable
    // endpoint; the powers are fused so that neither factor overflows on
    // its own as t approaches zero.
    const auto integrand = [&](double t) {
        const double inner = t / (c * c) + 1.0 / (lambda * c);
        return alpha * lambda * c * std::pow(t, alpha - 1.0) * std::pow(inner, alpha + 1.0);
    };
    boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0, l1 = 0.0;
    const double integral = integrator.integrate(integrand, 0.0, 1.0, 1e-10, &error, &l1);
    if (!std::isfinite(integral) || (l1 > 0.0 && error / l1 > 1e-6))
        throw std::runtime_error("phi_scaling: quadrature did not converge");

    double sum = 0.0;
    double prod = 1.0;  // prod_{j<i} 1/p_j
    for (int i = 1; i <= ctx.n; ++i) {
        const double qi =
            (i == ctx.n) ? 1.0 : 1.0 - ctx.mix.mix_p[static_cast<std::size_t>(i - 1)];
        sum += prod / qi;
        if (i < ctx.n) prod /= ctx.mix.mix_p[static_cast<std::size_t>(i - 1)];
    }
    return sum * integral;
}

double var_ratio_bound(const AsymptoticContext& ctx) {
    const double alpha = ctx.dist.alpha();
    double phi1 = 0.0;
    switch (ctx.mix.algorithm) {
        case Algorithm::ConditionalMixture:
            phi1 = phi_conditional(ctx, 1.0);
            break;
        case Algorithm::ScalingMixture:
            phi1 = phi_scaling(ctx, 1.0, ctx.mix.lambda);
            break;
        case Algorithm::StandardMC:
            throw std::domain_error("var_ratio_bound: unbounded for plain Monte Carlo");
    }
    return (phi1 - 1.0) / (alpha * alpha);
}

double es_ratio_bound(double alpha, double K) {
    if (!(alpha > 2.0))
        throw std::domain_error("es_ratio_bound: requires alpha > 2");
    if (!(K > 0.0)) throw std::invalid_argument("es_ratio_bound: K must be > 0");
    return (2.0 * K * (alpha - 1.0) / (alpha - 2.0) - 1.0) / (alpha * alpha);
}

std::optional<double> relative_error(std::span<const double> estimates) {
    if (estimates.size() < 2)
        throw std::invalid_argument("relative_error: need at least two estimates");
    RunningStats stats;
    for (double e : estimates) stats.add(e);
    if (stats.mean() == 0.0) return std::nullopt;
    return stats.stddev() / stats.mean();
}

}  // namespace istail
