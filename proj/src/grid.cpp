#include "lpfp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "lpfp/model.hpp"

namespace lpfp {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::size_t GridSpec::nearest_time_index(double t) const {
    const double r = std::round(t / delta_t);
    return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(n_t)));
}

std::size_t GridSpec::nearest_state_index(double x) const {
    const double r = std::round((x - x_min) / delta_x);
    return static_cast<std::size_t>(std::clamp(r, 0.0, static_cast<double>(n_s)));
}

GridSpec build_grid(double t_horizon, std::size_t n_t, double x_min, double x_max, std::size_t n_s,
                    std::vector<double> actions) {
    if (n_t < 1) throw std::invalid_argument("grid: n_t must be at least 1");
    if (n_s < 2) throw std::invalid_argument("grid: n_s must be at least 2");
    if (!(t_horizon > 0.0) || !std::isfinite(t_horizon))
        throw std::invalid_argument("grid: time horizon must be positive and finite");
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
        throw std::invalid_argument("grid: x_min must be below x_max");
    for (std::size_t k = 0; k < actions.size(); ++k) {
        if (!std::isfinite(actions[k])) throw std::invalid_argument("grid: non-finite action");
        if (k > 0 && !(actions[k - 1] < actions[k]))
            throw std::invalid_argument("grid: actions must be strictly increasing");
    }
    GridSpec g;
    g.t_horizon = t_horizon;
    g.n_t = n_t;
    g.delta_t = t_horizon / static_cast<double>(n_t);
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_s = n_s;
    g.delta_x = (x_max - x_min) / static_cast<double>(n_s);
    g.actions = std::move(actions);
    return g;
}

std::vector<double> uniform_actions(double lo, double hi, std::size_t count) {
    if (count == 0) throw std::invalid_argument("uniform_actions: count must be positive");
    if (count == 1) return {0.5 * (lo + hi)};
    std::vector<double> a(count);
    for (std::size_t k = 0; k < count; ++k)
        a[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    a.back() = hi;
    return a;
}

std::string serialize_grid(const GridSpec& grid) {
    std::ostringstream out;
    out << "t_horizon = " << format_double(grid.t_horizon) << '\n'
        << "n_t = " << grid.n_t << '\n'
        << "x_min = " << format_double(grid.x_min) << '\n'
        << "x_max = " << format_double(grid.x_max) << '\n'
        << "n_s = " << grid.n_s << '\n'
        << "actions =";
    for (std::size_t k = 0; k < grid.actions.size(); ++k) out << (k ? ", " : " ") << format_double(grid.actions[k]);
    out << '\n';
    return out.str();
}

GridSpec parse_grid(std::string_view text) {
    double t_horizon = 0.0, x_min = 0.0, x_max = 0.0;
    std::size_t n_t = 0, n_s = 0;
    std::vector<double> actions;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        if (key == "t_horizon") t_horizon = std::stod(value);
        else if (key == "n_t") n_t = std::stoul(value);
        else if (key == "x_min") x_min = std::stod(value);
        else if (key == "x_max") x_max = std::stod(value);
        else if (key == "n_s") n_s = std::stoul(value);
        else if (key == "actions") {
            std::istringstream items(value);
            std::string item;
            while (std::getline(items, item, ','))
                if (item.find_first_not_of(" \t") != std::string::npos) actions.push_back(std::stod(item));
        } else {
            throw std::invalid_argument("grid: unknown key '" + key + "'");
        }
    }
    return build_grid(t_horizon, n_t, x_min, x_max, n_s, std::move(actions));
}

std::string CflReport::describe(const GridSpec& grid) const {
    std::ostringstream out;
    out << (passed ? "CFL ok" : "CFL violated") << ": delta_t = " << format_double(delta_t)
        << ", bound = " << format_double(max_dt);
    if (std::isfinite(max_dt)) {
        out << " at (i=" << time_index << ", j=" << state_index;
        if (grid.has_actions()) out << ", k=" << action_index;
        out << "; t=" << format_double(grid.time(time_index)) << ", x=" << format_double(grid.state(state_index))
            << ")";
    }
    return out.str();
}

CflReport validate_cfl(const GridSpec& grid, const ModelSpec& model) {
    CflReport report;
    report.delta_t = grid.delta_t;
    const double dx = grid.delta_x;
    for (std::size_t i = 0; i < grid.n_t; ++i) {
        const double t = grid.time(i);
        for (std::size_t j = 1; j < grid.n_s; ++j) {
            const double x = grid.state(j);
            const double sigma = model.volatility(t, x);
            for (std::size_t k = 0; k < grid.n_actions(); ++k) {
                const double b = model.drift(t, x, grid.action(k));
                const double denom = sigma * sigma + dx * std::abs(b);
                if (denom <= 0.0) continue;
                const double bound = dx * dx / denom;
                if (bound < report.max_dt) {
                    report.max_dt = bound;
                    report.time_index = i;
                    report.state_index = j;
                    report.action_index = k;
                }
            }
        }
    }
    report.passed = grid.delta_t <= report.max_dt;
    return report;
}

double cfl_max_dt(const GridSpec& grid, const ModelSpec& model) { return validate_cfl(grid, model).max_dt; }

} // namespace lpfp
