#ifndef MOLLIFEM_QUADRATURE_HPP
#define MOLLIFEM_QUADRATURE_HPP

#include "mollifem/errors.hpp"

#include <cmath>
#include <utility>

namespace mollifem {

/// Composite-Simpson grid: m even subintervals of [a, b].
struct GridSpec {
    long m = 2;
    double a = 0.0;
    double b = 1.0;
};

void validate(const GridSpec& spec);

/// Composite Simpson approximation of the integral of g over [a, b].
/// Exact for polynomials of degree <= 3 on each panel.
template <class F>
double simpson(F&& g, const GridSpec& spec)
{
    validate(spec);
    const double h = (spec.b - spec.a) / static_cast<double>(spec.m);
    double odd = 0.0, even = 0.0;
    for (long k = 1; k < spec.m; k += 2)
        odd += g(spec.a + static_cast<double>(k) * h);
    for (long k = 2; k < spec.m; k += 2)
        even += g(spec.a + static_cast<double>(k) * h);
    return (h / 3.0) * (g(spec.a) + g(spec.b) + 4.0 * odd + 2.0 * even);
}

/// L2 distance of two scalar functions, estimated on the Simpson grid.
template <class F1, class F2>
double l2_distance(F1&& g1, F2&& g2, const GridSpec& spec)
{
    auto diff_sq = [&](double x) {
        const double d = g1(x) - g2(x);
        return d * d;
    };
    return std::sqrt(std::max(0.0, simpson(diff_sq, spec)));
}

} // namespace mollifem

#endif
