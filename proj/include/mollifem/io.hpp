#ifndef MOLLIFEM_IO_HPP
#define MOLLIFEM_IO_HPP

#include "mollifem/rates.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mollifem {

/// Command-line overrides; any field set here wins over the config file.
struct CliOverrides {
    std::optional<std::string> family;
    std::optional<std::string> kernel; // "K", "H" or "none"
    std::optional<std::vector<double>> lambda_grid;
    std::optional<std::vector<int>> n_values;
    std::optional<long> draws;
    std::optional<std::uint64_t> seed;
    std::optional<long> simpson_m;
};

/// Loads a study configuration. Precedence: defaults, then the MOLLIFEM_SEED
/// environment variable, then the file (TOML-style key/value with [study],
/// [noise] and [quadrature] tables), then explicit overrides. Throws
/// MissingFile, ParseError (with line info) or ValidationError.
StudyConfig parse_config(const std::optional<std::string>& path, const CliOverrides& overrides,
                         std::vector<std::string>* warnings = nullptr);

/// One value formatted with 12 significant digits.
std::string format_sig(double v);

std::string study_csv(const StudyTable& table);
std::string study_json(const StudyTable& table);

/// Config echo as JSON, exactly as embedded in study_json output.
std::string config_json(const StudyConfig& config);
/// Inverse of config_json / the "config" object of study_json output.
StudyConfig config_from_json(const std::string& text);

struct CurveRow {
    double lambda = 0.0;
    double gamma_theory_noreg = 0.0;
    double gamma_theory_reg = 0.0;
    bool lower_bound_only = false;
};

std::vector<CurveRow> theory_curves(int s_a, int s_r, int d, const std::vector<double>& lambdas);
std::string curves_csv(const std::vector<CurveRow>& rows);
std::string curves_json(const std::vector<CurveRow>& rows);

/// (x, value) samples of a piecewise polynomial: every breakpoint plus 10
/// interior points per piece.
std::string piecewise_csv(const PiecewisePoly& pp);

/// Writes to a file, or to standard output when path is "-" or empty.
void write_output(const std::string& path, const std::string& content);

} // namespace mollifem

#endif
