#ifndef MOLLIFEM_RATES_HPP
#define MOLLIFEM_RATES_HPP

#include "mollifem/experiment.hpp"
#include "mollifem/fe.hpp"
#include "mollifem/kernel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mollifem {

/// Description of a full lambda-sweep convergence study.
struct StudyConfig {
    Family family = Family::P1;
    std::optional<KernelKind> kernel;
    std::vector<double> lambda_grid;
    std::vector<int> n_values;
    long draws = 1000;
    std::uint64_t seed = 42;
    long simpson_m = 100000;
    std::string test_function = damped_sine_target_id();
    double sobolev_radius = 1.0; // metadata only

    bool operator==(const StudyConfig&) const = default;
};

/// Documented defaults: lambda 0..5 in steps of 0.25, n in {11, 101, 1001}.
StudyConfig default_config();

/// Replaces even entries by the next odd value for P2 designs; returns the
/// normalised list together with one warning per substitution.
std::pair<std::vector<int>, std::vector<std::string>> normalise_n_values(Family family,
                                                                         std::vector<int> ns);

struct RatePoint {
    long n = 0;
    double error = 0.0;
    double std_error = 0.0; // standard error of `error` (delta method)
};

/// Fitted decay exponent: error ~ n^(-gamma), least squares in log-log scale.
struct RateEstimate {
    double gamma = 0.0;
    double residual = 0.0; // max |fit - data| in log10 space
    std::vector<RatePoint> errors;
};

RateEstimate fit_rate(const std::vector<std::pair<long, double>>& points);

struct StudyRow {
    double lambda = 0.0;
    std::vector<double> sigmas; // per n
    std::vector<double> betas;  // per n; empty when no kernel
    RateEstimate noreg;
    std::optional<RateEstimate> reg;
    double gamma_theory_noreg = 0.0;
    RateBound gamma_theory_reg;          // meaningful only with a kernel
    std::optional<Strategy> regime;      // absent when no kernel
    std::vector<ErrorEstimate> noreg_raw;
    std::vector<ErrorEstimate> reg_raw;
};

struct StudyTable {
    StudyConfig config; // normalised echo
    std::vector<std::string> warnings;
    std::vector<StudyRow> rows;
};

/// Runs the sweep: for each lambda, sigma(n) = h^lambda, the unregularised
/// error uses beta = 0 and the regularised one beta = beta*(sigma, h). Both
/// share the per-(lambda, n) noise substream, so the comparison is paired.
StudyTable run_study(const StudyConfig& config);

} // namespace mollifem

#endif
