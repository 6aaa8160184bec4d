#include "mollifem/quadrature.hpp"

#include "mollifem/experiment.hpp"
#include "mollifem/fe.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mollifem;

TEST_CASE("simpson is exact for cubics")
{
    const double v = simpson([](double x) { return x * x * x; }, GridSpec{2, 0.0, 1.0});
    CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("simpson integrates constants exactly for any even m")
{
    for (long m : {2L, 10L, 1000L}) {
        const double v = simpson([](double) { return 1.0; }, GridSpec{m, 0.0, 1.0});
        CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("simpson error on sin^2(4x) decays like m^-4")
{
    // antiderivative of sin^2(4x) is x/2 - sin(8x)/16
    const double exact = 0.5 - std::sin(8.0) / 16.0;
    auto g = [](double x) {
        const double s = std::sin(4.0 * x);
        return s * s;
    };
    double prev = 0.0;
    for (long m : {8L, 16L, 32L, 64L}) {
        const double err = std::abs(simpson(g, GridSpec{m, 0.0, 1.0}) - exact);
        if (m > 8)
            CHECK(err < prev / 10.0); // ~16x per doubling for smooth integrands
        prev = err;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("simpson rejects invalid grids")
{
    auto g = [](double) { return 1.0; };
    CHECK_THROWS_AS(simpson(g, GridSpec{3, 0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(simpson(g, GridSpec{0, 0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(simpson(g, GridSpec{2, 1.0, 0.0}), ValidationError);
}

TEST_CASE("l2_distance basics")
{
    auto f = [](double x) { return std::sin(x); };
    CHECK(l2_distance(f, f, GridSpec{100, 0.0, 1.0}) == 0.0);
    const double v = l2_distance([](double) { return 1.0; }, [](double) { return 0.0; },
                                 GridSpec{100, 0.0, 1.0});
    CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("l2_distance of the interpolation error matches a fine trapezoid oracle")
{
    FEBasis basis(Family::P1, 101);
    const NodalVector z = sample(damped_sine_target, basis.design());
    auto recon = [&](double x) { return reconstruct(basis, z, x); };

    const double simpson_value = l2_distance(recon, damped_sine_target, GridSpec{100000, 0.0, 1.0});

    // independent oracle: 10^6-interval trapezoid rule on the squared error
    const long mt = 1000000;
    const double ht = 1.0 / mt;
    double acc = 0.0;
    for (long k = 0; k <= mt; ++k) {
        const double x = k * ht;
        const double d = recon(x) - damped_sine_target(x);
        const double w = (k == 0 || k == mt) ? 0.5 : 1.0;
        acc += w * d * d;
    }
    const double trapezoid_value = std::sqrt(acc * ht);

    CHECK(std::abs(simpson_value - trapezoid_value) < 1e-8);
}

TEST_CASE("simpson is linear and monotone")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const GridSpec spec{64, 0.0, 1.0};
    for (int trial = 0; trial < 25; ++trial) {
        const double alpha = 2.0 * unif(rng);
        const double c = unif(rng);
        auto g1 = [&](double x) { return std::sin(3.0 * x) + c; };
        auto g2 = [&](double x) { return x * x - c; };
        const double lhs = simpson([&](double x) { return alpha * g1(x) + g2(x); }, spec);
        const double rhs = alpha * simpson(g1, spec) + simpson(g2, spec);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        CHECK(simpson([&](double x) { return std::abs(g1(x)); }, spec) >= 0.0);
    }
}
