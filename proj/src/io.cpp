#include "mollifem/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mollifem {

std::string format_sig(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line)
{
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"')
            in_string = !in_string;
        else if (line[i] == '#' && !in_string)
            return line.substr(0, i);
    }
    return line;
}

[[noreturn]] void parse_fail(int line_no, const std::string& what)
{
    throw ParseError("config line " + std::to_string(line_no) + ": " + what);
}

double parse_number(const std::string& text, int line_no)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size())
            parse_fail(line_no, "trailing characters after number '" + text + "'");
        return v;
    } catch (const std::invalid_argument&) {
        parse_fail(line_no, "expected a number, got '" + text + "'");
    } catch (const std::out_of_range&) {
        parse_fail(line_no, "number out of range: '" + text + "'");
    }
}

std::vector<double> parse_array(const std::string& text, int line_no)
{
    std::vector<double> out;
    std::string body = trim(text.substr(1, text.size() - 2));
    if (body.empty())
        return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_number(trim(item), line_no));
    return out;
}

long to_integer(double v, const std::string& key)
{
    const long n = std::lround(v);
    if (std::abs(v - static_cast<double>(n)) > 1e-9)
        throw ValidationError(key + " must be an integer");
    return n;
}

struct RawConfig {
    StudyConfig cfg = default_config();
    bool lambda_set = false;
    bool n_set = false;
};

void apply_key(RawConfig& raw, const std::string& section, const std::string& key,
               const std::string& value, int line_no)
{
    auto as_string = [&]() -> std::string {
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            return value.substr(1, value.size() - 2);
        return value;
    };
    auto as_doubles = [&]() {
        if (value.empty() || value.front() != '[' || value.back() != ']')
            parse_fail(line_no, "expected an array for '" + key + "'");
        return parse_array(value, line_no);
    };

    const std::string qualified = section.empty() ? key : section + "." + key;
    if (qualified == "study.family" || qualified == "family") {
        raw.cfg.family = family_from_string(as_string());
    } else if (qualified == "study.kernel" || qualified == "kernel") {
        const std::string name = as_string();
        if (name == "none" || name.empty())
            raw.cfg.kernel.reset();
        else
            raw.cfg.kernel = kernel_kind_from_string(name);
    } else if (qualified == "study.lambda_grid" || qualified == "lambda_grid") {
        raw.cfg.lambda_grid = as_doubles();
        raw.lambda_set = true;
    } else if (qualified == "study.n_values" || qualified == "n_values") {
        raw.cfg.n_values.clear();
        for (double v : as_doubles())
            raw.cfg.n_values.push_back(static_cast<int>(to_integer(v, "n_values")));
        raw.n_set = true;
    } else if (qualified == "study.draws" || qualified == "draws") {
        raw.cfg.draws = to_integer(parse_number(value, line_no), "draws");
    } else if (qualified == "noise.seed" || qualified == "seed" || qualified == "study.seed") {
        raw.cfg.seed = static_cast<std::uint64_t>(to_integer(parse_number(value, line_no), "seed"));
    } else if (qualified == "quadrature.simpson_m" || qualified == "simpson_m" ||
               qualified == "study.simpson_m") {
        raw.cfg.simpson_m = to_integer(parse_number(value, line_no), "simpson_m");
    } else if (qualified == "study.test_function" || qualified == "test_function") {
        raw.cfg.test_function = as_string();
    } else if (qualified == "study.sobolev_radius" || qualified == "sobolev_radius") {
        raw.cfg.sobolev_radius = parse_number(value, line_no);
    } else {
        parse_fail(line_no, "unknown key '" + qualified + "'");
    }
}

void load_file(RawConfig& raw, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw MissingFile("cannot open config file '" + path + "'");
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                parse_fail(line_no, "unterminated table header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            parse_fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            parse_fail(line_no, "expected 'key = value'");
        apply_key(raw, section, key, value, line_no);
    }
}

void validate_parsed(const StudyConfig& cfg)
{
    if (cfg.lambda_grid.empty())
        throw ValidationError("lambda grid must not be empty");
    if (!std::is_sorted(cfg.lambda_grid.begin(), cfg.lambda_grid.end()))
        throw ValidationError("lambda grid must be sorted");
    if (cfg.n_values.size() < 2)
        throw ValidationError("need at least two n values");
    for (int n : cfg.n_values)
        if (n < 3)
            throw ValidationError("n values must be at least 3");
    if (cfg.draws < 1)
        throw ValidationError("draws must be positive");
    if (cfg.simpson_m < 2 || cfg.simpson_m % 2 != 0)
        throw ValidationError("simpson_m must be even and at least 2");
    if (cfg.test_function != damped_sine_target_id())
        throw ValidationError("unknown test function '" + cfg.test_function + "'");
}

} // namespace

StudyConfig parse_config(const std::optional<std::string>& path, const CliOverrides& overrides,
                         std::vector<std::string>* warnings)
{
    RawConfig raw;
    if (const char* env_seed = std::getenv("MOLLIFEM_SEED"))
        raw.cfg.seed = static_cast<std::uint64_t>(std::strtoull(env_seed, nullptr, 10));
    if (path)
        load_file(raw, *path);

    if (overrides.family)
        raw.cfg.family = family_from_string(*overrides.family);
    if (overrides.kernel) {
        if (*overrides.kernel == "none" || overrides.kernel->empty())
            raw.cfg.kernel.reset();
        else
            raw.cfg.kernel = kernel_kind_from_string(*overrides.kernel);
    }
    if (overrides.lambda_grid)
        raw.cfg.lambda_grid = *overrides.lambda_grid;
    if (overrides.n_values)
        raw.cfg.n_values = *overrides.n_values;
    if (overrides.draws)
        raw.cfg.draws = *overrides.draws;
    if (overrides.seed)
        raw.cfg.seed = *overrides.seed;
    if (overrides.simpson_m)
        raw.cfg.simpson_m = *overrides.simpson_m;

    validate_parsed(raw.cfg);
    auto [ns, warn] = normalise_n_values(raw.cfg.family, raw.cfg.n_values);
    raw.cfg.n_values = std::move(ns);
    if (warnings)
        *warnings = std::move(warn);
    return raw.cfg;
}

namespace {

void json_escape_into(std::string& out, const std::string& s)
{
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

std::string json_number(double v)
{
    if (std::isnan(v))
        return "null";
    return format_sig(v);
}

} // namespace

std::string config_json(const StudyConfig& cfg)
{
    std::string out = "{";
    out += "\"family\":";
    json_escape_into(out, to_string(cfg.family));
    out += ",\"kernel\":";
    if (cfg.kernel)
        json_escape_into(out, to_string(*cfg.kernel));
    else
        out += "null";
    out += ",\"lambda_grid\":[";
    for (std::size_t i = 0; i < cfg.lambda_grid.size(); ++i) {
        if (i)
            out += ",";
        out += format_sig(cfg.lambda_grid[i]);
    }
    out += "],\"n_values\":[";
    for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(cfg.n_values[i]);
    }
    out += "],\"draws\":" + std::to_string(cfg.draws);
    out += ",\"seed\":" + std::to_string(cfg.seed);
    out += ",\"simpson_m\":" + std::to_string(cfg.simpson_m);
    out += ",\"test_function\":";
    json_escape_into(out, cfg.test_function);
    out += ",\"sobolev_radius\":" + format_sig(cfg.sobolev_radius);
    out += "}";
    return out;
}

StudyConfig config_from_json(const std::string& text)
{
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.contains("config"))
        j = j["config"];
    StudyConfig cfg;
    cfg.family = family_from_string(j.at("family").get<std::string>());
    if (!j.at("kernel").is_null())
        cfg.kernel = kernel_kind_from_string(j.at("kernel").get<std::string>());
    cfg.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    cfg.n_values = j.at("n_values").get<std::vector<int>>();
    cfg.draws = j.at("draws").get<long>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.simpson_m = j.at("simpson_m").get<long>();
    cfg.test_function = j.at("test_function").get<std::string>();
    cfg.sobolev_radius = j.at("sobolev_radius").get<double>();
    return cfg;
}

std::string study_csv(const StudyTable& table)
{
    std::string out = "lambda,gamma_noreg,gamma_reg,gamma_theory_noreg,gamma_theory_reg,regime,"
                      "residual_noreg,residual_reg\n";
    for (const auto& row : table.rows) {
        out += format_sig(row.lambda);
        out += "," + format_sig(row.noreg.gamma);
        out += "," + (row.reg ? format_sig(row.reg->gamma) : std::string("nan"));
        out += "," + format_sig(row.gamma_theory_noreg);
        out += "," + (row.regime ? format_sig(row.gamma_theory_reg.value) : std::string("nan"));
        out += "," + (row.regime ? to_string(*row.regime) : "none");
        out += "," + format_sig(row.noreg.residual);
        out += "," + (row.reg ? format_sig(row.reg->residual) : std::string("nan"));
        out += "\n";
    }
    return out;
}

namespace {

void append_points_json(std::string& out, const std::vector<int>& ns,
                        const std::vector<double>& sigmas, const std::vector<double>& betas,
                        const RateEstimate& fit, const std::vector<ErrorEstimate>& raw)
{
    out += "[";
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (k)
            out += ",";
        out += "{\"n\":" + std::to_string(ns[k]);
        out += ",\"sigma\":" + json_number(sigmas[k]);
        if (!betas.empty())
            out += ",\"beta\":" + json_number(betas[k]);
        out += ",\"error\":" + json_number(fit.errors[k].error);
        out += ",\"std_error\":" + json_number(fit.errors[k].std_error);
        out += ",\"mean_sq\":" + json_number(raw[k].mean_sq);
        out += ",\"mean_sq_std_error\":" + json_number(raw[k].std_error);
        out += "}";
    }
    out += "]";
}

} // namespace

std::string study_json(const StudyTable& table)
{
    std::string out = "{\"config\":" + config_json(table.config);
    out += ",\"warnings\":[";
    for (std::size_t i = 0; i < table.warnings.size(); ++i) {
        if (i)
            out += ",";
        json_escape_into(out, table.warnings[i]);
    }
    out += "],\"rows\":[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (r)
            out += ",";
        out += "{\"lambda\":" + format_sig(row.lambda);
        out += ",\"gamma_noreg\":" + json_number(row.noreg.gamma);
        out += ",\"gamma_reg\":" + (row.reg ? json_number(row.reg->gamma) : std::string("null"));
        out += ",\"gamma_theory_noreg\":" + json_number(row.gamma_theory_noreg);
        out += ",\"gamma_theory_reg\":" +
               (row.regime ? json_number(row.gamma_theory_reg.value) : std::string("null"));
        out += ",\"lower_bound_only\":";
        out += row.regime ? (row.gamma_theory_reg.lower_bound_only ? "true" : "false") : "null";
        out += ",\"regime\":";
        if (row.regime)
            json_escape_into(out, to_string(*row.regime));
        else
            out += "null";
        out += ",\"residual_noreg\":" + json_number(row.noreg.residual);
        out += ",\"residual_reg\":" + (row.reg ? json_number(row.reg->residual) : std::string("null"));
        out += ",\"noreg\":";
        append_points_json(out, table.config.n_values, row.sigmas, {}, row.noreg, row.noreg_raw);
        out += ",\"reg\":";
        if (row.reg) {
            append_points_json(out, table.config.n_values, row.sigmas, row.betas, *row.reg,
                               row.reg_raw);
        } else {
            out += "null";
        }
        out += "}";
    }
    out += "]}";
    return out;
}

std::vector<CurveRow> theory_curves(int s_a, int s_r, int d, const std::vector<double>& lambdas)
{
    std::vector<CurveRow> rows;
    rows.reserve(lambdas.size());
    for (double lambda : lambdas) {
        auto [noreg, reg] = predicted_gamma(RegimeParams{s_a, s_r, d, lambda});
        rows.push_back({lambda, noreg, reg.value, reg.lower_bound_only});
    }
    return rows;
}

std::string curves_csv(const std::vector<CurveRow>& rows)
{
    std::string out = "lambda,gamma_theory_noreg,gamma_theory_reg,lower_bound_only\n";
    for (const auto& row : rows) {
        out += format_sig(row.lambda);
        out += "," + format_sig(row.gamma_theory_noreg);
        out += "," + format_sig(row.gamma_theory_reg);
        out += row.lower_bound_only ? ",1\n" : ",0\n";
    }
    return out;
}

std::string curves_json(const std::vector<CurveRow>& rows)
{
    std::string out = "{\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i)
            out += ",";
        out += "{\"lambda\":" + format_sig(rows[i].lambda);
        out += ",\"gamma_theory_noreg\":" + format_sig(rows[i].gamma_theory_noreg);
        out += ",\"gamma_theory_reg\":" + format_sig(rows[i].gamma_theory_reg);
        out += ",\"lower_bound_only\":";
        out += rows[i].lower_bound_only ? "true" : "false";
        out += "}";
    }
    out += "]}";
    return out;
}

std::string piecewise_csv(const PiecewisePoly& pp)
{
    std::string out = "x,value\n";
    auto emit = [&](double x) { out += format_sig(x) + "," + format_sig(pp(x)) + "\n"; };
    const auto& breaks = pp.breakpoints();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        emit(breaks[i]);
        const double w = breaks[i + 1] - breaks[i];
        for (int k = 1; k <= 10; ++k)
            emit(breaks[i] + w * k / 11.0);
    }
    emit(breaks.back());
    return out;
}

void write_output(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!std::cout.good())
            throw IoError("failed writing to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open output file '" + path + "'");
    out << content;
    out.flush();
    if (!out.good())
        throw IoError("failed writing to '" + path + "'");
}

} // namespace mollifem
