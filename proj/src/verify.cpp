#include "mollifem/verify.hpp"

#include "mollifem/experiment.hpp"
#include "mollifem/fe.hpp"
#include "mollifem/io.hpp"
#include "mollifem/kernel.hpp"
#include "mollifem/noise.hpp"
#include "mollifem/quadrature.hpp"
#include "mollifem/rates.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mollifem {

namespace {

struct Harness {
    std::vector<CheckResult> results;

    void check(const std::string& name, bool ok, const std::string& detail)
    {
        results.push_back({name, ok, detail});
    }

    // max deviation style check
    void check_max(const std::string& name, double worst, double tol)
    {
        std::ostringstream os;
        os << "max deviation " << worst << " (tolerance " << tol << ")";
        check(name, worst <= tol, os.str());
    }
};

double fitted_slope(const std::vector<std::pair<double, double>>& xy)
{
    // least squares slope of log10(y) against log10(x)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
        const double lx = std::log10(x), ly = std::log10(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double k = static_cast<double>(xy.size());
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

void mesh_checks(Harness& h)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    double worst_pu = 0.0;
    for (Family family : {Family::P1, Family::P2}) {
        for (int n : {11, 101}) {
            FEBasis basis(family, n);
            const NodalVector ones = NodalVector::Ones(n);
            for (int k = 0; k < 1000; ++k) {
                const double x = unif(rng);
                worst_pu = std::max(worst_pu, std::abs(reconstruct(basis, ones, x) - 1.0));
            }
        }
    }
    h.check_max("mesh_fe.partition_of_unity", worst_pu, 1e-12);

    double worst_lag = 0.0;
    for (Family family : {Family::P1, Family::P2}) {
        for (int n : {11, 101}) {
            FEBasis basis(family, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double expect = (i == j) ? 1.0 : 0.0;
                    worst_lag = std::max(
                        worst_lag, std::abs(basis.eval(i, basis.design().nodes[j]) - expect));
                }
        }
    }
    h.check_max("mesh_fe.lagrange_delta", worst_lag, 1e-14);

    double worst_rep = 0.0;
    for (Family family : {Family::P1, Family::P2}) {
        const int max_deg = family == Family::P1 ? 1 : 2;
        FEBasis basis(family, 11);
        for (int deg = 0; deg <= max_deg; ++deg) {
            auto p = [&](double x) { return std::pow(1.7 * x - 0.3, deg); };
            const NodalVector z = sample(p, basis.design());
            for (int g = 0; g <= 500; ++g) {
                const double x = g / 500.0;
                worst_rep = std::max(worst_rep, std::abs(reconstruct(basis, z, x) - p(x)));
            }
        }
    }
    h.check_max("mesh_fe.polynomial_reproduction", worst_rep, 1e-10);

    double worst_sup = 0.0;
    for (Family family : {Family::P1, Family::P2}) {
        FEBasis basis(family, 11);
        const double hh = basis.design().h;
        for (int i = 0; i < basis.size(); ++i) {
            const double xi = basis.design().nodes[i];
            for (int k = 0; k < 200; ++k) {
                const double x = unif(rng);
                if (std::abs(x - xi) >= 2.0 * hh)
                    worst_sup = std::max(worst_sup, std::abs(basis.eval(i, x)));
            }
        }
    }
    h.check_max("mesh_fe.support_bound", worst_sup, 0.0);

    for (Family family : {Family::P1, Family::P2}) {
        std::vector<std::pair<double, double>> pts;
        int s_a = 0;
        for (int n : {11, 101, 1001}) {
            FEBasis basis(family, n);
            s_a = basis.approximation_order();
            const NodalVector z = sample(damped_sine_target, basis.design());
            const double err = l2_distance([&](double x) { return reconstruct(basis, z, x); },
                                           damped_sine_target, GridSpec{100000, 0.0, 1.0});
            pts.emplace_back(static_cast<double>(n), err);
        }
        const double slope = -fitted_slope(pts);
        h.check_max("mesh_fe.approximation_order." + to_string(family),
                    std::abs(slope - s_a), 0.15);
    }

    // ||phi_i|| ~ sqrt(h): the normalised norms must not drift with n.
    double worst_drift = 0.0;
    double lo = 1e9, hi = 0.0;
    for (Family family : {Family::P1, Family::P2}) {
        double ref_min = 0.0, ref_max = 0.0;
        bool first = true;
        for (int n : {11, 101, 1001}) {
            FEBasis basis(family, n);
            const Eigen::VectorXd ratios =
                basis_l2_norms(basis) / std::sqrt(basis.design().h);
            const double mn = ratios.minCoeff(), mx = ratios.maxCoeff();
            lo = std::min(lo, mn);
            hi = std::max(hi, mx);
            if (first) {
                ref_min = mn;
                ref_max = mx;
                first = false;
            } else {
                worst_drift = std::max({worst_drift, std::abs(mn - ref_min),
                                        std::abs(mx - ref_max)});
            }
        }
    }
    h.check("mesh_fe.basis_norm_scaling", worst_drift <= 1e-10 && lo >= 0.3 && hi <= 1.0,
            "normalised norms in [" + format_sig(lo) + ", " + format_sig(hi) +
                "], drift across n " + format_sig(worst_drift));
}

void kernel_checks(Harness& h)
{
    const Kernel K = Kernel::uniform_right();
    const Kernel H = Kernel::uniform_symmetric();

    double worst_int = 0.0;
    for (const Kernel& kernel : {K, H})
        for (Family family : {Family::P1, Family::P2}) {
            FEBasis basis(family, 11);
            for (double beta : {0.03, 0.15})
                for (int i : {0, 1, 5}) {
                    const double before = basis.basis_poly(i).integral();
                    const double after = convolve_basis(kernel, beta, basis, i).integral();
                    worst_int = std::max(worst_int, std::abs(after - before));
                }
        }
    h.check_max("kernel.convolution_preserves_integral", worst_int, 1e-12);

    double worst_scale = 0.0;
    for (const Kernel& kernel : {K, H}) {
        const double base_sq = kernel.shape().squared_l2();
        for (double beta : {1.0, 0.1, 0.01}) {
            const PiecewisePoly kb = kernel.scaled(beta);
            worst_scale = std::max(worst_scale, std::abs(kb.integral() - 1.0));
            worst_scale =
                std::max(worst_scale, std::abs(kb.squared_l2() - base_sq / beta) * beta);
        }
    }
    h.check_max("kernel.scaling_identity", worst_scale, 1e-12);

    for (const Kernel& kernel : {K, H}) {
        std::vector<std::pair<double, double>> pts;
        for (double beta : {0.1, 0.05, 0.025, 0.0125}) {
            auto smoothed = [&](double x) {
                return convolve_oracle(kernel, beta, damped_sine_target, x, 512);
            };
            pts.emplace_back(beta,
                             l2_distance(smoothed, damped_sine_target, GridSpec{20000, 0.0, 1.0}));
        }
        const double slope = fitted_slope(pts);
        h.check_max("kernel.mollification_order." + to_string(kernel.order() == 1
                                                                  ? KernelKind::K
                                                                  : KernelKind::H),
                    std::abs(slope - kernel.order()), 0.15);
    }

    double worst_oracle = 0.0;
    for (const Kernel& kernel : {K, H})
        for (Family family : {Family::P1, Family::P2}) {
            FEBasis basis(family, 101);
            const double hh = basis.design().h;
            for (double lambda : {0.5, 2.0}) {
                const double beta = beta_star(std::pow(hh, lambda), hh, kernel.order(), 1);
                const PiecewisePoly closed = convolve_basis(kernel, beta, basis, 50);
                for (int g = 0; g <= 150; ++g) {
                    const double x = closed.support_lo() +
                                     (closed.support_hi() - closed.support_lo()) * g / 150.0;
                    const double via_oracle = convolve_oracle(
                        kernel, beta, [&](double y) { return basis.eval(50, y); }, x, 20000);
                    worst_oracle = std::max(worst_oracle, std::abs(closed(x) - via_oracle));
                }
            }
        }
    h.check_max("kernel.closed_form_vs_oracle", worst_oracle, 1e-8);
}

void quadrature_checks(Harness& h)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst_lin = 0.0;
    bool monotone = true;
    for (int trial = 0; trial < 20; ++trial) {
        const double a1 = unif(rng), a2 = unif(rng), c = unif(rng), alpha = 2.0 * unif(rng);
        auto g1 = [&](double x) { return a1 * std::sin(5 * x) + c; };
        auto g2 = [&](double x) { return a2 * x * x - c * x; };
        const GridSpec spec{64, 0.0, 1.0};
        const double combined =
            simpson([&](double x) { return alpha * g1(x) + g2(x); }, spec);
        worst_lin = std::max(
            worst_lin, std::abs(combined - (alpha * simpson(g1, spec) + simpson(g2, spec))));
        if (simpson([&](double x) { return std::abs(g1(x)); }, spec) < 0.0)
            monotone = false;
    }
    h.check("quadrature.linearity_monotonicity", worst_lin <= 1e-13 && monotone,
            "max linearity defect " + format_sig(worst_lin));

    double worst_rel = 0.0;
    for (Family family : {Family::P1, Family::P2})
        for (int n : {11, 101})
            for (double sigma : {0.0, 0.1}) {
                FEBasis basis(family, n);
                NodalVector z = sample(damped_sine_target, basis.design());
                if (sigma > 0.0)
                    z += sigma * gaussian_vector(NoiseModel{1.0, 99}, n, 0);
                auto err_sq = [&](double x) {
                    const double e = reconstruct(basis, z, x) - damped_sine_target(x);
                    return e * e;
                };
                const double v1 = simpson(err_sq, GridSpec{100000, 0.0, 1.0});
                const double v2 = simpson(err_sq, GridSpec{200000, 0.0, 1.0});
                worst_rel = std::max(worst_rel, std::abs(v2 - v1) / std::abs(v1));
            }
    h.check_max("quadrature.doubling_stability", worst_rel, 1e-10);
}

void experiment_checks(Harness& h)
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    bool all_within = true;
    double worst_pull = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const Family family = (trial % 2 == 0) ? Family::P1 : Family::P2;
        const int n = 11 + 2 * static_cast<int>(unif(rng) * 60);
        const double sigma = 0.005 + 0.2 * unif(rng);
        FEBasis basis(family, n);
        const GridSpec grid{20000, 0.0, 1.0};
        NoiseModel model{sigma, 1000 + static_cast<std::uint64_t>(trial)};
        const ErrorEstimate mc =
            mc_error(damped_sine_target, basis, nullptr, 0.0, model, 400, grid);
        const double analytic = analytic_noreg_error(damped_sine_target, basis, sigma, grid);
        const double pull = std::abs(mc.mean_sq - analytic * analytic) /
                            std::max(mc.std_error, 1e-300);
        worst_pull = std::max(worst_pull, pull);
        if (pull > 3.0)
            all_within = false;
    }
    h.check("experiment.bias_variance_identity", all_within,
            "worst |mc - analytic| = " + format_sig(worst_pull) + " standard errors");

    bool monotone = true;
    for (int s_a : {2, 3})
        for (int s_r : {1, 2})
            for (int d : {1, 2}) {
                double prev = -1.0;
                for (int k = 0; k <= 40; ++k) {
                    const double lambda = 0.25 * k;
                    const auto [g, reg] = predicted_gamma(RegimeParams{s_a, s_r, d, lambda});
                    if (g < prev - 1e-15 || g > static_cast<double>(s_a) / d + 1e-15)
                        monotone = false;
                    prev = g;
                }
            }
    h.check("experiment.gamma_monotone_capped", monotone, "min(lambda, s_a)/d over the grid");

    double worst_gap = 0.0;
    for (int s_a : {2, 3, 4})
        for (int s_r = 1; s_r < s_a; ++s_r)
            for (int d : {1, 2}) {
                const double expected = static_cast<double>(s_a - s_r) / (2 * s_r + d);
                double best = 0.0;
                for (int k = 0; k <= 60; ++k) {
                    const double lambda = 0.25 * k;
                    if (lambda > lambda_max(s_a, s_r, d))
                        break;
                    const auto [g, reg] = predicted_gamma(RegimeParams{s_a, s_r, d, lambda});
                    best = std::max(best, g - reg.value);
                }
                const auto [g_at, reg_at] =
                    predicted_gamma(RegimeParams{s_a, s_r, d, static_cast<double>(s_a)});
                worst_gap = std::max({worst_gap, std::abs(g_at - reg_at.value - expected),
                                      std::abs(best - expected)});
            }
    h.check_max("experiment.maximal_gain_identity", worst_gap, 1e-12);

    bool floor_ok = true;
    double worst_floor = 1e9;
    for (KernelKind kind : {KernelKind::K, KernelKind::H}) {
        const Kernel kernel = make_kernel(kind);
        for (int n : {11, 101}) {
            FEBasis basis(Family::P1, n);
            const double hh = basis.design().h;
            const double val = std::sqrt(mollified_norms(basis, kernel, hh * hh).squaredNorm());
            worst_floor = std::min(worst_floor, val);
            if (val < 0.5)
                floor_ok = false;
        }
    }
    h.check("experiment.noise_floor_small_beta", floor_ok,
            "min sqrt(sum ||K_b*phi_i||^2) = " + format_sig(worst_floor) + " (threshold 0.5)");
}

} // namespace

std::vector<CheckResult> run_verification()
{
    Harness h;
    mesh_checks(h);
    kernel_checks(h);
    quadrature_checks(h);
    experiment_checks(h);
    return h.results;
}

} // namespace mollifem
