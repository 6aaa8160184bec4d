#include "mollifem/kernel.hpp"

#include "mollifem/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace mollifem;

TEST_CASE("kernel moments, exact and against a quadrature oracle")
{
    const Kernel K = Kernel::uniform_right();
    const Kernel H = Kernel::uniform_symmetric();

    CHECK(moment(K, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(moment(H, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(moment(K, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(moment(H, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    for (const Kernel& kernel : {K, H})
        for (int r = 0; r <= 4; ++r) {
            const double oracle =
                simpson([&](double x) { return std::pow(x, r) * kernel.shape()(x); },
                        GridSpec{20000, kernel.shape().support_lo() - 1e-13,
                                 kernel.shape().support_hi() + 1e-13});
            CHECK(moment(kernel, r) == doctest::Approx(oracle).epsilon(1e-9));
        }
}

TEST_CASE("order detection")
{
    CHECK(Kernel::uniform_right().order() == 1);
    CHECK(Kernel::uniform_symmetric().order() == 2);

    // doubled mass is not a probability weight
    CHECK_THROWS_AS(Kernel::from_shape(PiecewisePoly::constant(-1.0, 1.0, 1.0)),
                    NotAProbabilityWeight);

    // 9/8 - 15/8 x^2 on [-1,1]: mass 1, moments 1..3 vanish, moment 4 = -3/35
    Eigen::VectorXd c(3);
    c << 9.0 / 8.0, 0.0, -15.0 / 8.0;
    PiecewisePoly shape({-1.0, 1.0}, {c});
    CHECK(detect_order(shape) == 4);
    CHECK_THROWS_AS(detect_order(shape, 3), OrderCapExceeded);
}

TEST_CASE("scaled kernels keep unit mass and rescale the L2 norm")
{
    for (const Kernel& kernel : {Kernel::uniform_right(), Kernel::uniform_symmetric()}) {
        const double base = kernel.shape().squared_l2();
        for (double beta : {1.0, 0.1, 0.01}) {
            const PiecewisePoly kb = kernel.scaled(beta);
            CHECK(kb.integral() == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(kb.squared_l2() == doctest::Approx(base / beta).epsilon(1e-13));
        }
        CHECK_THROWS_AS(kernel.scaled(0.0), ValidationError);
    }
}

TEST_CASE("mollified hat value at its node")
{
    // for the symmetric kernel with beta <= h the node value is 1 - beta/(2h)
    FEBasis basis(Family::P1, 11);
    const Kernel H = Kernel::uniform_symmetric();
    const double h = basis.design().h;
    for (double beta : {0.02, 0.05, 0.1}) {
        const PiecewisePoly conv = convolve_basis(H, beta, basis, 5);
        const double x5 = basis.design().nodes[5];
        CHECK(conv(x5) == doctest::Approx(1.0 - beta / (2.0 * h)).epsilon(1e-12));
        const double oracle =
            convolve_oracle(H, beta, [&](double y) { return basis.eval(5, y); }, x5, 20000);
        CHECK(conv(x5) == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("support of a mollified basis function stays within the sum of supports")
{
    FEBasis basis(Family::P2, 11);
    const Kernel K = Kernel::uniform_right();
    const double h = basis.design().h;
    const double beta = 0.07;
    for (int i : {0, 1, 2, 10}) {
        const PiecewisePoly conv = convolve_basis(K, beta, basis, i);
        const double xi = basis.design().nodes[i];
        CHECK(conv.support_lo() >= xi - 2.0 * h - beta - 1e-12);
        CHECK(conv.support_hi() <= xi + 2.0 * h + beta + 1e-12);
    }
}

namespace {

// Simpson-based convolution oracle that splits at the known kink locations, so
// the per-piece integrand is a plain polynomial of degree <= 3.
double aligned_conv_oracle(const Kernel& kernel, double beta, const FEBasis& basis, int i,
                           double x)
{
    const PiecewisePoly kb = kernel.scaled(beta);
    const PiecewisePoly phi = basis.basis_poly(i);
    const double lo = std::max(phi.support_lo(), x - kb.support_hi());
    const double hi = std::min(phi.support_hi(), x - kb.support_lo());
    if (hi <= lo)
        return 0.0;
    std::vector<double> cuts{lo, hi};
    for (double t : phi.breakpoints())
        if (t > lo && t < hi)
            cuts.push_back(t);
    for (double t : kb.breakpoints()) {
        const double y = x - t;
        if (y > lo && y < hi)
            cuts.push_back(y);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        if (b - a < 1e-15)
            continue;
        const double margin = (b - a) * 1e-12;
        total += simpson(
            [&](double y) {
                const double yy = std::min(std::max(y, a + margin), b - margin);
                return kb(x - yy) * phi(yy);
            },
            GridSpec{8, a, b});
    }
    return total;
}

} // namespace

TEST_CASE("closed-form convolutions match the Simpson oracle on a dense grid")
{
    struct Case {
        KernelKind kind;
        Family family;
        double beta;
    };
    for (const Case& c : {Case{KernelKind::K, Family::P1, 0.03},
                          Case{KernelKind::H, Family::P2, 0.05}}) {
        const Kernel kernel = make_kernel(c.kind);
        FEBasis basis(c.family, 11);
        double worst = 0.0;
        for (int i : {0, 1, 5, 10}) {
            const PiecewisePoly conv = convolve_basis(kernel, c.beta, basis, i);
            const double lo = conv.support_lo(), hi = conv.support_hi();
            for (int g = 0; g <= 2500; ++g) {
                const double x = lo + (hi - lo) * g / 2500.0;
                worst = std::max(worst,
                                 std::abs(conv(x) - aligned_conv_oracle(kernel, c.beta,
                                                                        basis, i, x)));
            }
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("blind convolve_oracle basics")
{
    const Kernel K = Kernel::uniform_right();
    const Kernel H = Kernel::uniform_symmetric();
    auto one = [](double) { return 1.0; };

    CHECK(convolve_oracle(H, 0.1, one, 0.5, 1000) == doctest::Approx(1.0).epsilon(1e-12));
    // K is supported on [0,1], so at x = 0 the window [x - beta, x] leaves Omega
    CHECK(convolve_oracle(K, 0.1, one, 0.0, 1000) == 0.0);
    CHECK(convolve_oracle(K, 0.1, one, 0.0, 100000) == 0.0);
    CHECK_THROWS_AS(convolve_oracle(K, 0.0, one, 0.5, 100), ValidationError);
}

TEST_CASE("mollified reconstruction: identity at beta 0, oracle agreement at beta h")
{
    FEBasis basis(Family::P1, 11);
    const Kernel H = Kernel::uniform_symmetric();
    const NodalVector z = sample(damped_sine_target, basis.design());

    for (double x : {0.0, 0.123, 0.5, 0.98})
        CHECK(mollified_reconstruct(basis, z, H, 0.0, x) == reconstruct(basis, z, x));

    CHECK(mollified_reconstruct(basis, NodalVector::Zero(11), H, 0.05, 0.4) == 0.0);
    CHECK_THROWS_AS(mollified_reconstruct(basis, NodalVector::Zero(10), H, 0.05, 0.4),
                    ValidationError);

    const double beta = basis.design().h;
    auto recon = [&](double y) { return reconstruct(basis, z, y); };
    for (int g = 0; g <= 100; ++g) {
        const double x = g / 100.0;
        const double direct = mollified_reconstruct(basis, z, H, beta, x);
        const double oracle = convolve_oracle(H, beta, recon, x, 20000);
        CHECK(direct == doctest::Approx(oracle).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("mollified norms: Young bound, Simpson agreement, cache identity")
{
    FEBasis basis(Family::P1, 11);
    const Kernel K = Kernel::uniform_right();
    const double beta = 0.04;

    const Eigen::VectorXd plain = basis_l2_norms(basis);
    const Eigen::VectorXd smooth = mollified_norms(basis, K, beta);
    for (int i = 0; i < basis.size(); ++i)
        CHECK(smooth[i] <= plain[i] + 1e-12);

    auto mb = mollified_basis_cache(basis, K, beta);
    CHECK(mollified_basis_cache(basis, K, beta).get() == mb.get()); // idempotent cache

    for (int i : {0, 5, 10}) {
        const PiecewisePoly pp = mb->poly(i);
        auto sq = [&](double x) {
            const double v = pp(x);
            return v * v;
        };
        const double oracle = std::sqrt(
            simpson(sq, GridSpec{20000, pp.support_lo(), pp.support_hi()}));
        CHECK(smooth[i] == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("convolution preserves the basis integral")
{
    for (Family family : {Family::P1, Family::P2}) {
        FEBasis basis(family, 11);
        for (KernelKind kind : {KernelKind::K, KernelKind::H}) {
            const Kernel kernel = make_kernel(kind);
            for (int i : {0, 4, 10}) {
                const double before = basis.basis_poly(i).integral();
                const double after = convolve_basis(kernel, 0.07, basis, i).integral();
                CHECK(after == doctest::Approx(before).epsilon(1e-12));
            }
        }
    }
}
