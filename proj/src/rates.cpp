#include "mollifem/rates.hpp"

#include "mollifem/noise.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace mollifem {

StudyConfig default_config()
{
    StudyConfig cfg;
    for (int k = 0; k <= 20; ++k)
        cfg.lambda_grid.push_back(0.25 * k);
    cfg.n_values = {11, 101, 1001};
    return cfg;
}

std::pair<std::vector<int>, std::vector<std::string>> normalise_n_values(Family family,
                                                                         std::vector<int> ns)
{
    std::vector<std::string> warnings;
    if (family == Family::P2) {
        for (int& n : ns) {
            if (n % 2 == 0) {
                warnings.push_back("P2 requires odd n; substituted " + std::to_string(n + 1) +
                                   " for requested " + std::to_string(n));
                n += 1;
            }
        }
    }
    return {std::move(ns), std::move(warnings)};
}

RateEstimate fit_rate(const std::vector<std::pair<long, double>>& points)
{
    if (points.size() < 2)
        throw ValidationError("fit_rate: need at least two points");
    std::set<long> seen;
    for (const auto& [n, e] : points) {
        if (!seen.insert(n).second)
            throw ValidationError("fit_rate: duplicate n = " + std::to_string(n));
        if (!(e > 0.0))
            throw ValidationError("fit_rate: error values must be positive");
    }

    const Eigen::Index k = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd A(k, 2);
    Eigen::VectorXd y(k);
    for (Eigen::Index r = 0; r < k; ++r) {
        A(r, 0) = 1.0;
        A(r, 1) = std::log10(static_cast<double>(points[static_cast<std::size_t>(r)].first));
        y[r] = std::log10(points[static_cast<std::size_t>(r)].second);
    }
    const Eigen::Vector2d coeffs = A.colPivHouseholderQr().solve(y);

    RateEstimate est;
    est.gamma = -coeffs[1];
    est.residual = (A * coeffs - y).cwiseAbs().maxCoeff();
    est.errors.reserve(points.size());
    for (const auto& [n, e] : points)
        est.errors.push_back({n, e, 0.0});
    return est;
}

namespace {

void validate_config(const StudyConfig& cfg)
{
    if (cfg.lambda_grid.empty())
        throw ValidationError("study: lambda grid must not be empty");
    if (!std::is_sorted(cfg.lambda_grid.begin(), cfg.lambda_grid.end()))
        throw ValidationError("study: lambda grid must be sorted");
    if (cfg.lambda_grid.front() < 0.0)
        throw ValidationError("study: lambda values must be nonnegative");
    if (cfg.n_values.size() < 2)
        throw ValidationError("study: need at least two n values");
    for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
        if (cfg.n_values[i] < 3)
            throw ValidationError("study: n values must be at least 3");
        if (i > 0 && cfg.n_values[i] <= cfg.n_values[i - 1])
            throw ValidationError("study: n values must be strictly increasing");
    }
    if (cfg.draws < 1)
        throw ValidationError("study: draws must be positive");
    if (cfg.simpson_m < 2 || cfg.simpson_m % 2 != 0)
        throw ValidationError("study: simpson_m must be even and at least 2");
}

RateEstimate fit_from_estimates(const std::vector<int>& ns,
                                const std::vector<ErrorEstimate>& raw)
{
    std::vector<std::pair<long, double>> points;
    points.reserve(ns.size());
    for (std::size_t k = 0; k < ns.size(); ++k)
        points.emplace_back(ns[k], raw[k].error());
    RateEstimate est = fit_rate(points);
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const double e = raw[k].error();
        est.errors[k].std_error = (e > 0.0) ? raw[k].std_error / (2.0 * e) : 0.0;
    }
    return est;
}

} // namespace

StudyTable run_study(const StudyConfig& config)
{
    validate_config(config);

    StudyTable table;
    table.config = config;
    auto [ns, warnings] = normalise_n_values(config.family, config.n_values);
    table.config.n_values = ns;
    table.warnings = std::move(warnings);

    const auto f = damped_sine_target;
    const GridSpec grid{config.simpson_m, 0.0, 1.0};

    std::vector<FEBasis> bases;
    bases.reserve(ns.size());
    for (int n : ns)
        bases.emplace_back(config.family, n);

    std::optional<Kernel> kernel;
    if (config.kernel)
        kernel = make_kernel(*config.kernel);

    const int s_a = bases.front().approximation_order();

    for (std::size_t li = 0; li < config.lambda_grid.size(); ++li) {
        const double lambda = config.lambda_grid[li];
        StudyRow row;
        row.lambda = lambda;

        for (std::size_t ni = 0; ni < ns.size(); ++ni) {
            const FEBasis& basis = bases[ni];
            const double h = basis.design().h;
            const double sigma = std::pow(h, lambda);
            row.sigmas.push_back(sigma);

            NoiseModel model{sigma, substream_seed(config.seed, li + 1, ni + 1)};
            row.noreg_raw.push_back(mc_error(f, basis, nullptr, 0.0, model, config.draws, grid));

            if (kernel) {
                const double beta = beta_star(sigma, h, kernel->order(), 1);
                row.betas.push_back(beta);
                row.reg_raw.push_back(
                    mc_error(f, basis, &*kernel, beta, model, config.draws, grid));
            }
        }

        row.noreg = fit_from_estimates(ns, row.noreg_raw);
        if (kernel)
            row.reg = fit_from_estimates(ns, row.reg_raw);

        RegimeParams params{s_a, kernel ? kernel->order() : 1, 1, lambda};
        auto [gamma_noreg, gamma_reg] = predicted_gamma(params);
        row.gamma_theory_noreg = gamma_noreg;
        if (kernel) {
            row.gamma_theory_reg = gamma_reg;
            row.regime = recommend_strategy(params);
        }

        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace mollifem
