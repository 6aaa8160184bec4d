#include "mollifem/experiment.hpp"
#include "mollifem/io.hpp"
#include "mollifem/kernel.hpp"
#include "mollifem/rates.hpp"
#include "mollifem/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitVerification = 4;
constexpr int kExitIo = 5;

struct CommonOutput {
    std::string path = "-";
    std::string format = "csv";
};

void add_output_options(CLI::App* cmd, CommonOutput& out)
{
    cmd->add_option("--output", out.path, "Output file, or '-' for standard output");
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

int run_study_command(const std::optional<std::string>& config_path,
                      const mollifem::CliOverrides& overrides, const CommonOutput& out)
{
    std::vector<std::string> warnings;
    const mollifem::StudyConfig cfg = mollifem::parse_config(config_path, overrides, &warnings);
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << "\n";
    const mollifem::StudyTable table = mollifem::run_study(cfg);
    mollifem::write_output(out.path, out.format == "csv" ? mollifem::study_csv(table)
                                                         : mollifem::study_json(table));
    return kExitOk;
}

int run_curves_command(int s_a, int s_r, int d, const std::vector<double>& lambdas,
                       const CommonOutput& out)
{
    const auto rows = mollifem::theory_curves(s_a, s_r, d, lambdas);
    mollifem::write_output(out.path, out.format == "csv" ? mollifem::curves_csv(rows)
                                                         : mollifem::curves_json(rows));
    return kExitOk;
}

int run_convolve_command(const std::string& family, int n, const std::string& kernel_name,
                         double beta, int index, const CommonOutput& out)
{
    const mollifem::FEBasis basis(mollifem::family_from_string(family), n);
    const mollifem::Kernel kernel =
        mollifem::make_kernel(mollifem::kernel_kind_from_string(kernel_name));
    const mollifem::PiecewisePoly pp = mollifem::convolve_basis(kernel, beta, basis, index);
    mollifem::write_output(out.path, mollifem::piecewise_csv(pp));
    return kExitOk;
}

int run_verify_command()
{
    const auto results = mollifem::run_verification();
    bool all_ok = true;
    for (const auto& r : results) {
        std::printf("%-4s %-42s %s\n", r.passed ? "ok" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all_ok = all_ok && r.passed;
    }
    std::printf("%zu checks, %s\n", results.size(), all_ok ? "all passed" : "FAILURES present");
    return all_ok ? kExitOk : kExitVerification;
}

std::vector<double> default_lambda_grid()
{
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k)
        grid.push_back(0.25 * k);
    return grid;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reconstruction of a smooth function from noisy nodal samples with "
                 "(optionally mollified) finite-element bases, plus convergence-rate studies"};
    app.require_subcommand(1);

    // study
    auto* study = app.add_subcommand("study", "Run a lambda-sweep convergence study");
    std::string config_path;
    mollifem::CliOverrides ov;
    std::vector<double> lambda_override;
    std::vector<int> n_override;
    long draws = 0, simpson_m = 0;
    std::uint64_t seed = 0;
    std::string family_flag, kernel_flag;
    CommonOutput study_out;
    study->add_option("--config", config_path, "TOML-style configuration file");
    study->add_option("--family", family_flag, "Finite-element family (P1 or P2)");
    study->add_option("--kernel", kernel_flag, "Smoothing kernel (K, H or none)");
    study->add_option("--lambda-grid", lambda_override, "Noise exponents")->delimiter(',');
    study->add_option("--n-values", n_override, "Node counts")->delimiter(',');
    study->add_option("--draws", draws, "Monte Carlo draws per error");
    study->add_option("--seed", seed, "Master random seed");
    study->add_option("--simpson-m", simpson_m, "Simpson subintervals for norms");
    add_output_options(study, study_out);

    // curves
    auto* curves = app.add_subcommand("curves", "Emit the theoretical rate curves");
    int c_sa = 2, c_sr = 1, c_d = 1;
    std::string c_family, c_kernel;
    std::vector<double> c_lambdas;
    CommonOutput curves_out;
    curves->add_option("--sa", c_sa, "Approximation order s_a");
    curves->add_option("--sr", c_sr, "Regularisation order s_r");
    curves->add_option("--d", c_d, "Dimension d");
    curves->add_option("--family", c_family, "Derive s_a from a family (P1 or P2)");
    curves->add_option("--kernel", c_kernel, "Derive s_r from a kernel (K or H)");
    curves->add_option("--lambda-grid", c_lambdas, "Noise exponents")->delimiter(',');
    add_output_options(curves, curves_out);

    // convolve
    auto* convolve = app.add_subcommand("convolve", "Dump a mollified basis function as CSV");
    std::string v_family = "P1", v_kernel = "K";
    int v_n = 11, v_index = 5;
    double v_beta = 0.05;
    CommonOutput convolve_out;
    convolve->add_option("--family", v_family, "Finite-element family");
    convolve->add_option("--n", v_n, "Node count");
    convolve->add_option("--kernel", v_kernel, "Smoothing kernel (K or H)");
    convolve->add_option("--beta", v_beta, "Bandwidth (positive)");
    convolve->add_option("--index", v_index, "Basis index");
    add_output_options(convolve, convolve_out);

    // verify
    app.add_subcommand("verify", "Run the library invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (study->parsed()) {
            if (!family_flag.empty())
                ov.family = family_flag;
            if (study->count("--kernel"))
                ov.kernel = kernel_flag;
            if (!lambda_override.empty())
                ov.lambda_grid = lambda_override;
            if (!n_override.empty())
                ov.n_values = n_override;
            if (study->count("--draws"))
                ov.draws = draws;
            if (study->count("--seed"))
                ov.seed = seed;
            if (study->count("--simpson-m"))
                ov.simpson_m = simpson_m;
            std::optional<std::string> path;
            if (!config_path.empty())
                path = config_path;
            return run_study_command(path, ov, study_out);
        }
        if (curves->parsed()) {
            if (!c_family.empty())
                c_sa = mollifem::FEBasis(mollifem::family_from_string(c_family), 11)
                           .approximation_order();
            if (!c_kernel.empty())
                c_sr = mollifem::make_kernel(mollifem::kernel_kind_from_string(c_kernel)).order();
            if (c_lambdas.empty())
                c_lambdas = default_lambda_grid();
            return run_curves_command(c_sa, c_sr, c_d, c_lambdas, curves_out);
        }
        if (convolve->parsed())
            return run_convolve_command(v_family, v_n, v_kernel, v_beta, v_index, convolve_out);
        return run_verify_command();
    } catch (const mollifem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mollifem::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const mollifem::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
