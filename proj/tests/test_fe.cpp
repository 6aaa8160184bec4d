#include "mollifem/fe.hpp"

#include "mollifem/experiment.hpp"
#include "mollifem/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mollifem;

TEST_CASE("designs follow the mesh conventions")
{
    const Design p1 = build_design(Family::P1, 11);
    CHECK(p1.h == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p1.nodes[0] == 0.0);
    CHECK(p1.nodes[10] == 1.0);
    CHECK(p1.nodes[3] == doctest::Approx(0.3).epsilon(1e-15));

    const Design p2 = build_design(Family::P2, 11);
    CHECK(p2.h == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p2.nodes[1] == doctest::Approx(0.1).epsilon(1e-15)); // spaced h/2
    CHECK(p2.nodes[10] == 1.0);

    for (int i = 0; i + 1 < p2.n; ++i)
        CHECK(p2.nodes[i] < p2.nodes[i + 1]);
}

TEST_CASE("designs reject too few or even-for-P2 node counts")
{
    CHECK_THROWS_AS(build_design(Family::P1, 2), ValidationError);
    CHECK_THROWS_AS(build_design(Family::P2, 10), EvenNodeCount);
}

TEST_CASE("hat basis point values")
{
    FEBasis basis(Family::P1, 11);
    CHECK(basis.eval(3, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(basis.eval(3, 0.35) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(basis.eval(3, 0.45) == 0.0);
    CHECK_THROWS_AS(basis.eval(11, 0.5), ValidationError);
    CHECK_THROWS_AS(basis.eval(-1, 0.5), ValidationError);
}

TEST_CASE("quadratic midpoint basis value from the bubble shape")
{
    // node 0.1 is a midpoint node; at x = 0.15 the bubble 1 - 4 z^2 is taken
    // at z = 0.05 / 0.2, giving 0.75
    FEBasis basis(Family::P2, 11);
    const double expect = 1.0 - 4.0 * 0.25 * 0.25;
    CHECK(expect == 0.75);
    CHECK(basis.eval(1, 0.15) == doctest::Approx(expect).epsilon(1e-14));
    // vertex node 0.2: shape (1-|z|)(1-2|z|) at z = 0.25
    const double vertex = (1.0 - 0.25) * (1.0 - 0.5);
    CHECK(basis.eval(2, 0.25) == doctest::Approx(vertex).epsilon(1e-14));
}

TEST_CASE("Lagrange property at the nodes")
{
    for (Family family : {Family::P1, Family::P2})
        for (int n : {11, 101}) {
            FEBasis basis(family, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double v = basis.eval(i, basis.design().nodes[j]);
                    CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) <= 1e-14);
                }
        }
}

TEST_CASE("partition of unity at random points")
{
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Family family : {Family::P1, Family::P2}) {
        FEBasis basis(family, 11);
        const NodalVector ones = NodalVector::Ones(11);
        for (int k = 0; k < 1000; ++k) {
            const double x = unif(rng);
            CHECK(std::abs(reconstruct(basis, ones, x) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("reconstruct is linear and reproduces the right polynomials")
{
    FEBasis p1(Family::P1, 11);
    CHECK(reconstruct(p1, NodalVector::Zero(11), 0.37) == 0.0);
    CHECK_THROWS_AS(reconstruct(p1, NodalVector::Zero(10), 0.5), ValidationError);

    // P1 reproduces affine functions
    auto affine = [](double x) { return 2.0 * x - 0.4; };
    const NodalVector za = sample(affine, p1.design());
    for (int g = 0; g <= 100; ++g) {
        const double x = g / 100.0;
        CHECK(std::abs(reconstruct(p1, za, x) - affine(x)) <= 1e-10);
    }

    // P2 reproduces quadratics
    FEBasis p2(Family::P2, 11);
    auto quad = [](double x) { return 1.5 * x * x - 0.7 * x + 0.2; };
    const NodalVector zq = sample(quad, p2.design());
    for (int g = 0; g <= 100; ++g) {
        const double x = g / 100.0;
        CHECK(std::abs(reconstruct(p2, zq, x) - quad(x)) <= 1e-10);
    }
}

TEST_CASE("basis functions vanish away from their node")
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Family family : {Family::P1, Family::P2}) {
        FEBasis basis(family, 11);
        const double h = basis.design().h;
        for (int i = 0; i < basis.size(); ++i)
            for (int k = 0; k < 100; ++k) {
                const double x = unif(rng);
                if (std::abs(x - basis.design().nodes[i]) >= 2.0 * h)
                    CHECK(basis.eval(i, x) == 0.0);
            }
    }
}

TEST_CASE("sampling the study target")
{
    const Design design = build_design(Family::P1, 11);
    const NodalVector z = sample(damped_sine_target, design);
    CHECK(z[0] == 0.0);
    CHECK(z[10] == 0.0);
    const double s2 = std::sin(2.0);
    CHECK(z[5] == doctest::Approx(0.25 * s2 * s2).epsilon(1e-14));
}

TEST_CASE("basis L2 norms match closed forms and a quadrature oracle")
{
    FEBasis p1(Family::P1, 11);
    const Eigen::VectorXd norms = basis_l2_norms(p1);
    const double h = 0.1;
    CHECK(norms[5] * norms[5] == doctest::Approx(2.0 * h / 3.0).epsilon(1e-13));
    CHECK(norms[0] * norms[0] == doctest::Approx(h / 3.0).epsilon(1e-13));

    for (Family family : {Family::P1, Family::P2}) {
        FEBasis basis(family, 11);
        const Eigen::VectorXd ns = basis_l2_norms(basis);
        for (int i : {0, 1, 2, 5, 10}) {
            auto sq = [&](double x) {
                const double v = basis.eval(i, x);
                return v * v;
            };
            const double oracle = std::sqrt(simpson(sq, GridSpec{20000, 0.0, 1.0}));
            CHECK(ns[i] == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("basis_poly agrees with eval everywhere")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Family family : {Family::P1, Family::P2}) {
        FEBasis basis(family, 11);
        for (int i : {0, 1, 2, 7, 10}) {
            const PiecewisePoly pp = basis.basis_poly(i);
            for (int k = 0; k < 200; ++k) {
                const double x = unif(rng);
                CHECK(pp(x) == doctest::Approx(basis.eval(i, x)).epsilon(1e-13));
            }
        }
    }
}
