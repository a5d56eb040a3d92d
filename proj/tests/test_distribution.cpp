#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "istail/distribution.hpp"
#include "istail/random.hpp"
#include "istail/stats.hpp"

using istail::HeavyTailDistribution;
using istail::RandomStream;

TEST_CASE("tail: spot values and support convention") {
    const auto d2 = HeavyTailDistribution::pareto(2.0);
    const auto d3 = HeavyTailDistribution::pareto(3.0);

    CHECK(d2.tail(0.0) == 1.0);
    CHECK(d2.tail(99.0) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(d3.tail(9.0) == doctest::Approx(1e-3).epsilon(1e-12));

    CHECK(d2.tail(-1e-9) == 1.0);
    CHECK(d2.tail(-5.0) == 1.0);

    CHECK(d2.tail(1.0) < d2.tail(0.5));
    CHECK(d2.tail(10.0) < d2.tail(1.0));
}

TEST_CASE("density: spot values, zero left of support") {
    const auto d2 = HeavyTailDistribution::pareto(2.0);
    const auto d3 = HeavyTailDistribution::pareto(3.0);

    CHECK(d2.density(0.0) == 2.0);
    CHECK(d3.density(1.0) == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(d2.density(-1.0) == 0.0);
    CHECK(d2.density(-1e-9) == 0.0);
}

TEST_CASE("density integrates to one") {
    for (double alpha : {2.0, 3.0, 2.5}) {
        const auto d = HeavyTailDistribution::pareto(alpha);
        const double x_max = d.quantile(1.0 - 1e-10);
        boost::math::quadrature::tanh_sinh<double> integrator;
        const double body = integrator.integrate([&](double x) { return d.density(x); }, 0.0,
                                                 x_max, 1e-12);
        CHECK(body + d.tail(x_max) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("quantile: spot values and domain errors") {
    const auto d2 = HeavyTailDistribution::pareto(2.0);
    CHECK(d2.quantile(0.99) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(d2.quantile(0.75) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(d2.quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(d2.quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(d2.quantile(-0.5), std::domain_error);
    CHECK_THROWS_AS(d2.quantile(1.5), std::domain_error);

    const auto d3 = HeavyTailDistribution::pareto(3.0);
    CHECK(d3.quantile(1e-12) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(d3.quantile(1e-12) >= 0.0);
}

TEST_CASE("quantile inverts tail across alpha classes") {
    for (double alpha : {2.0, 3.0, 2.5, 1.3}) {
        const auto d = HeavyTailDistribution::pareto(alpha);
        for (double p = 0.01; p < 1.0; p += 0.014) {
            const double x = d.quantile(p);
            CHECK(d.tail(x) == doctest::Approx(1.0 - p).epsilon(1e-10));
        }
    }
}

TEST_CASE("tail is regularly varying with index -alpha") {
    for (double alpha : {2.0, 3.0}) {
        const auto d = HeavyTailDistribution::pareto(alpha);
        const double t = 1e6;
        for (double x : {0.5, 2.0, 10.0}) {
            const double ratio = d.tail(t * x) / d.tail(t);
            CHECK(ratio == doctest::Approx(std::pow(x, -alpha)).epsilon(1e-4));
        }
    }
}

TEST_CASE("constructor rejects bad alpha") {
    CHECK_THROWS_AS(HeavyTailDistribution::pareto(0.0), std::invalid_argument);
    CHECK_THROWS_AS(HeavyTailDistribution::pareto(-2.0), std::invalid_argument);
}

TEST_CASE("sample: inverse transform at pinned uniforms") {
    const auto d2 = HeavyTailDistribution::pareto(2.0);
    struct OneShot {
        double u;
        double uniform() { return u; }
    };
    OneShot s{0.75};
    CHECK(d2.sample(s) == doctest::Approx(1.0).epsilon(1e-12));
    s.u = 1e-15;
    CHECK(d2.sample(s) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(d2.sample(s) >= 0.0);
}

TEST_CASE("sample: empirical mean matches 1/(alpha-1)") {
    const auto d3 = HeavyTailDistribution::pareto(3.0);
    RandomStream stream(2024);
    istail::RunningStats stats;
    for (int i = 0; i < 1000000; ++i) stats.add(d3.sample(stream));
    CHECK(stats.mean() == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("uniform stream stays strictly inside (0,1)") {
    RandomStream stream(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = stream.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("stream determinism and substream separation") {
    RandomStream a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const double ua = a.uniform();
        if (ua != b.uniform()) all_equal = false;
        if (ua != c.uniform()) any_diff = true;
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("mix_seed reproduces the canonical splitmix64 sequence") {
    // Golden vectors from an independent implementation of splitmix64.
    CHECK(istail::mix_seed(0, 0) == 0xE220A8397B1DCDAFull);
    CHECK(istail::mix_seed(0, 1) == 0x6E789E6AA1B965F4ull);
    CHECK(istail::mix_seed(0, 2) == 0x06C45D188009454Full);
    CHECK(istail::mix_seed(12345, 7) == 0x6E7411B06820371Cull);
    CHECK(istail::mix_seed(0xDEADBEEF, 0) == 0x4ADFB90F68C9EB9Bull);

    // Distinct indices and distinct seeds must separate.
    CHECK(istail::mix_seed(1, 0) != istail::mix_seed(1, 1));
    CHECK(istail::mix_seed(1, 0) != istail::mix_seed(2, 0));
}
