#include "lpfp/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lpfp/errors.hpp"

namespace lpfp {

bool RunConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'", line);
    }
}

double parse_positive(const std::string& key, const std::string& v, int line) {
    const double d = parse_double(key, v, line);
    if (!(d > 0.0)) throw ConfigError(key + ": must be positive", line);
    return d;
}

std::size_t parse_count(const std::string& key, const std::string& v, int line) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError(key + ": expected a positive integer, got '" + v + "'", line);
    const unsigned long long n = std::stoull(v);
    if (n == 0) throw ConfigError(key + ": must be positive", line);
    return static_cast<std::size_t>(n);
}

bool parse_bool(const std::string& key, const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'", line);
}

} // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::set<std::string> seen;
    std::map<std::string, int> line_of;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key", line);
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'", line);
        line_of[key] = line;

        if (key == "problem.name") {
            const auto names = builtin_model_names();
            if (std::find(names.begin(), names.end(), value) == names.end())
                throw ConfigError("problem.name: unknown problem '" + value + "'", line);
            c.problem = value;
        } else if (key == "problem.drift_scale") c.params.drift_scale = parse_double(key, value, line);
        else if (key == "problem.kernel_weight") c.params.kernel_weight = parse_double(key, value, line);
        else if (key == "problem.variance") c.params.variance = parse_positive(key, value, line);
        else if (key == "grid.t_horizon") c.t_horizon = parse_positive(key, value, line);
        else if (key == "grid.n_t") c.n_t = parse_count(key, value, line);
        else if (key == "grid.n_s") {
            c.n_s = parse_count(key, value, line);
            if (*c.n_s < 2) throw ConfigError("grid.n_s: must be at least 2", line);
        } else if (key == "grid.n_a") c.n_a = parse_count(key, value, line);
        else if (key == "grid.x_min") c.x_min = parse_double(key, value, line);
        else if (key == "grid.x_max") c.x_max = parse_double(key, value, line);
        else if (key == "fp.iterations") c.iterations = parse_count(key, value, line);
        else if (key == "fp.method") {
            if (value != "lp" && value != "dp") throw ConfigError("fp.method: expected lp or dp", line);
            c.method = parse_method(value);
        } else if (key == "fp.early_stop_eps") c.early_stop = parse_positive(key, value, line);
        else if (key == "fp.cfl_override") c.cfl_override = parse_bool(key, value, line);
        else if (key == "fp.reference_point") c.reference_point = parse_double(key, value, line);
        else if (key == "fp.w1") c.compute_w1 = parse_bool(key, value, line);
        else if (key == "fp.w1_max_exact_atoms") c.w1_max_exact_atoms = parse_count(key, value, line);
        else if (key == "lp.feasibility_tol") c.lp.feasibility_tol = parse_positive(key, value, line);
        else if (key == "lp.optimality_tol") c.lp.optimality_tol = parse_positive(key, value, line);
        else if (key == "lp.max_iterations") c.lp.max_iterations = parse_count(key, value, line);
        else if (key == "lp.export_path") c.lp_export_path = value;
        else if (key == "output.directory") {
            if (value.empty()) throw ConfigError("output.directory: must not be empty", line);
            c.output_directory = value;
        } else if (key == "output.formats") {
            c.formats.clear();
            std::istringstream items(value);
            for (std::string item; std::getline(items, item, ',');) {
                item = trim(item);
                if (item != "csv" && item != "svg" && item != "json")
                    throw ConfigError("output.formats: unknown format '" + item + "'", line);
                c.formats.push_back(item);
            }
        } else if (key == "output.record_timings") c.record_timings = parse_bool(key, value, line);
        else throw ConfigError("unknown key '" + key + "'", line);
    }

    const bool control = c.problem == "control_example";
    if (!control && c.n_a) throw ConfigError("grid.n_a: only control problems take an action grid", line_of["grid.n_a"]);
    if (control && (c.x_min || c.x_max) && !(c.x_min && c.x_max))
        throw ConfigError("grid.x_min and grid.x_max must be given together", line_of[c.x_min ? "grid.x_min" : "grid.x_max"]);
    if (c.x_min && c.x_max && !(*c.x_min < *c.x_max))
        throw ConfigError("grid.x_min must be below grid.x_max", line_of["grid.x_max"]);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    return parse_config(in);
}

ModelSpec resolve_model(const RunConfig& config) { return builtin_model(config.problem, config.params); }

GridSpec resolve_grid(const RunConfig& config, const ModelSpec& model) {
    const bool control = model.kind == ProblemKind::control_absorption;
    const std::size_t n_t = config.n_t.value_or(control ? 280 : 50);
    const std::size_t n_s = config.n_s.value_or(control ? 64 : 80);
    const std::size_t n_a = config.n_a.value_or(5);
    GridSpec base = default_grid(model, 1, 2, n_a);
    const double horizon = config.t_horizon;
    double lo = base.x_min, hi = base.x_max;
    if (!control) {
        // Default truncation scales with the horizon through the drift margin.
        const double half = 5.0 * model.initial_std + model.drift_bound * horizon;
        lo = model.initial_mean - half;
        hi = model.initial_mean + half;
    }
    lo = config.x_min.value_or(lo);
    hi = config.x_max.value_or(hi);
    try {
        return build_grid(horizon, n_t, lo, hi, n_s, control ? base.actions : std::vector<double>{});
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& c) {
    const ModelSpec model = resolve_model(c);
    const GridSpec grid = resolve_grid(c, model);
    std::vector<std::pair<std::string, std::string>> s;
    s.emplace_back("problem.name", c.problem);
    s.emplace_back("problem.drift_scale", number(c.params.drift_scale));
    if (model.kind == ProblemKind::control_absorption)
        s.emplace_back("problem.kernel_weight", number(c.params.kernel_weight));
    s.emplace_back("problem.variance", number(model.initial_std * model.initial_std));
    s.emplace_back("grid.t_horizon", number(grid.t_horizon));
    s.emplace_back("grid.n_t", std::to_string(grid.n_t));
    s.emplace_back("grid.n_s", std::to_string(grid.n_s));
    s.emplace_back("grid.x_min", number(grid.x_min));
    s.emplace_back("grid.x_max", number(grid.x_max));
    if (grid.has_actions()) s.emplace_back("grid.n_a", std::to_string(grid.actions.size()));
    s.emplace_back("grid.delta_t", number(grid.delta_t));
    s.emplace_back("grid.delta_x", number(grid.delta_x));
    s.emplace_back("fp.iterations", std::to_string(c.iterations));
    s.emplace_back("fp.method", to_string(c.method));
    s.emplace_back("fp.early_stop_eps", c.early_stop ? number(*c.early_stop) : "off");
    s.emplace_back("fp.cfl_override", c.cfl_override ? "true" : "false");
    s.emplace_back("fp.reference_point", number(c.reference_point.value_or(0.5 * (grid.x_min + grid.x_max))));
    s.emplace_back("fp.w1", c.compute_w1 ? "true" : "false");
    s.emplace_back("fp.w1_max_exact_atoms", std::to_string(c.w1_max_exact_atoms));
    s.emplace_back("lp.feasibility_tol", number(c.lp.feasibility_tol));
    s.emplace_back("lp.optimality_tol", number(c.lp.optimality_tol));
    s.emplace_back("lp.max_iterations", std::to_string(c.lp.max_iterations));
    s.emplace_back("lp.export_path", c.lp_export_path.empty() ? "none" : c.lp_export_path);
    s.emplace_back("output.directory", c.output_directory);
    std::string formats;
    for (const auto& f : c.formats) formats += (formats.empty() ? "" : ",") + f;
    s.emplace_back("output.formats", formats);
    s.emplace_back("output.record_timings", c.record_timings ? "true" : "false");
    return s;
}

ConfigReport validate_config(const std::filesystem::path& path) {
    ConfigReport report;
    try {
        const RunConfig config = load_config(path);
        const ModelSpec model = resolve_model(config);
        const GridSpec grid = resolve_grid(config, model);
        report.settings = resolved_settings(config);
        report.cfl = validate_cfl(grid, model);
        report.cfl_ok = report.cfl.passed;
        report.cfl_text = report.cfl.describe(grid);
        report.ok = report.cfl_ok || config.cfl_override;
    } catch (const std::exception& e) {
        report.ok = false;
        report.error = e.what();
    }
    return report;
}

} // namespace lpfp
