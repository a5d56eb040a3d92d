#pragma once

#include "istail/distribution.hpp"

namespace istail {

/// Exact tail of a two-step walk, P(Z_1 + Z_2 > lambda), by adaptive
/// quadrature of the convolution to 1e-9 relative accuracy.  Returns 1 for
/// lambda <= 0.  Throws std::runtime_error if the quadrature fails.
double oracle_tail_n2(const HeavyTailDistribution& d, double lambda);

/// Inverse of oracle_tail_n2 at level p: bisection to 1e-9 relative
/// bracket width.  Throws std::domain_error for p outside (0,1).
double oracle_quantile_n2(const HeavyTailDistribution& d, double p);

}  // namespace istail
