#include "istail/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "istail/asymptotics.hpp"

namespace istail {

double oracle_tail_n2(const HeavyTailDistribution& d, double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    // P(S_2 > l) = tail(l) + int_0^l f(z) tail(l - z) dz.  The integrand is
    // smooth inside (0, l); tanh_sinh converges fast and reports its error.
    const auto integrand = [&](double z) { return d.density(z) * d.tail(lambda - z); };
    boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0, l1 = 0.0;
    const double integral = integrator.integrate(integrand, 0.0, lambda, 1e-11, &error, &l1);
    const double result = d.tail(lambda) + integral;
    // The error estimate bottoms out near machine precision in absolute
    // terms, so judge it against the full probability: for small lambda the
    // integral is a vanishing correction to tail(lambda) ~ 1 and a fixed
    // error/l1 test would reject exact results.
    if (!std::isfinite(integral) || !(result > 0.0) || error > 1e-9 * result)
        throw std::runtime_error("oracle_tail_n2: quadrature did not converge");
    return result;
}

double oracle_quantile_n2(const HeavyTailDistribution& d, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("oracle_quantile_n2: p must be in (0,1)");
    const double level = 1.0 - p;

    // The asymptotic quantile sits below the true one, so it seeds the
    // bracket's low end; double the high end until the tail drops under
    // the level.
    double lo = 0.0;
    double hi = std::max(1.0, asymptotic_quantile(d.alpha(), 2, p));
    while (oracle_tail_n2(d, hi) > level) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw std::runtime_error("oracle_quantile_n2: bracketing failed");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-9 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (oracle_tail_n2(d, mid) > level)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace istail
