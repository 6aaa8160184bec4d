#ifndef MOLLIFEM_EXPERIMENT_HPP
#define MOLLIFEM_EXPERIMENT_HPP

#include "mollifem/fe.hpp"
#include "mollifem/kernel.hpp"
#include "mollifem/noise.hpp"
#include "mollifem/quadrature.hpp"

#include <functional>
#include <string>
#include <utility>

namespace mollifem {

enum class Strategy { Regularise, DontRegularise, EitherRegularisePreferred };

std::string to_string(Strategy strategy);

/// The exponents steering a reconstruction regime: approximation order s_a,
/// regularisation order s_r, dimension d, and the noise exponent lambda in
/// sigma = h^lambda.
struct RegimeParams {
    int s_a = 2;
    int s_r = 1;
    int d = 1;
    double lambda = 0.0;
};

/// A predicted convergence rate; some regimes only come with a proven lower
/// bound on the rate rather than an exact value.
struct RateBound {
    double value = 0.0;
    bool lower_bound_only = false;
};

/// Monte Carlo estimate of a mean squared reconstruction error.
struct ErrorEstimate {
    double mean_sq = 0.0;
    double std_error = 0.0;
    long draws = 0;

    double error() const { return std::sqrt(std::max(0.0, mean_sq)); }
};

/// Classical bandwidth rule sigma^(2/(2 s_r + d)) h^(d/(2 s_r + d)), unit constant.
double beta_star(double sigma, double h, int s_r, int d);

/// Threshold s_a + (d/2)(s_a/s_r - 1) separating the regimes where smoothing
/// at the classical bandwidth wins, ties, or loses.
double lambda_max(int s_a, int s_r, int d);

/// Predicted decay exponents (vs n) of the unregularised and regularised
/// errors for noise sigma = h^lambda.
std::pair<double, RateBound> predicted_gamma(const RegimeParams& params);

Strategy recommend_strategy(const RegimeParams& params);

/// The fixed target (1-x)^2 sin^2(4x) reconstructed in all studies.
double damped_sine_target(double x);
inline const char* damped_sine_target_id() { return "(1-x)^2*sin(4x)^2"; }

/// sqrt(sigma^2 sum ||phi_i||^2 + ||P_n E_n f - f||^2): the closed-form
/// bias-variance value of the unregularised error.
double analytic_noreg_error(const std::function<double(double)>& f, const FEBasis& basis,
                            double sigma, const GridSpec& grid);

/// Mean over draws of the squared L2 error of the (optionally mollified)
/// reconstruction from noisy samples, with norms taken on the Simpson grid.
/// kernel == nullptr or beta == 0 means no regularisation.
ErrorEstimate mc_error(const std::function<double(double)>& f, const FEBasis& basis,
                       const Kernel* kernel, double beta, const NoiseModel& model, long draws,
                       const GridSpec& grid);

namespace detail {
/// Reference implementation of mc_error that assembles the estimator point by
/// point on the grid; used to validate the production path.
ErrorEstimate mc_error_direct(const std::function<double(double)>& f, const FEBasis& basis,
                              const Kernel* kernel, double beta, const NoiseModel& model,
                              long draws, const GridSpec& grid);
} // namespace detail

} // namespace mollifem

#endif
