#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace lpfp {

struct ModelSpec;

/// Uniform time/state grid with an optional action grid.
///
/// Time nodes are t_i = i * delta_t for i in [0, n_t]; state nodes are
/// x_j = x_min + j * delta_x for j in [0, n_s], with x_{n_s} pinned to x_max.
/// Nodes j = 0 and j = n_s are absorbing; j in [1, n_s - 1] are interior.
/// An empty action list means a pure stopping problem, which behaves as a
/// single pseudo-action with value 0 everywhere an action index is needed.
struct GridSpec {
    double t_horizon = 1.0;
    std::size_t n_t = 1;
    double delta_t = 1.0;
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_s = 2;
    double delta_x = 0.5;
    std::vector<double> actions;

    double time(std::size_t i) const { return i == n_t ? t_horizon : static_cast<double>(i) * delta_t; }
    double state(std::size_t j) const {
        return j == n_s ? x_max : x_min + static_cast<double>(j) * delta_x;
    }
    std::size_t n_actions() const { return actions.empty() ? 1 : actions.size(); }
    double action(std::size_t k) const { return actions.empty() ? 0.0 : actions[k]; }
    bool is_interior(std::size_t j) const { return j >= 1 && j + 1 <= n_s; }
    bool has_actions() const { return !actions.empty(); }

    // Index of the node closest to the requested time/state.
    std::size_t nearest_time_index(double t) const;
    std::size_t nearest_state_index(double x) const;

    bool operator==(const GridSpec&) const = default;
};

/// Throws std::invalid_argument on zero counts, degenerate bounds or actions
/// that are not strictly increasing.
GridSpec build_grid(double t_horizon, std::size_t n_t, double x_min, double x_max, std::size_t n_s,
                    std::vector<double> actions = {});

/// Evenly spaced action grid on [lo, hi]; a single action sits at the midpoint.
std::vector<double> uniform_actions(double lo, double hi, std::size_t count);

std::string serialize_grid(const GridSpec& grid);
GridSpec parse_grid(std::string_view text);

/// Result of checking delta_t against the upwind stability bound
/// delta_t <= delta_x^2 / (sigma^2 + delta_x |b|) over every (i, j, k).
struct CflReport {
    bool passed = true;
    double max_dt = std::numeric_limits<double>::infinity();
    double delta_t = 0.0;
    // Node where the bound is smallest; meaningless when max_dt is infinite.
    std::size_t time_index = 0;
    std::size_t state_index = 0;
    std::size_t action_index = 0;

    std::string describe(const GridSpec& grid) const;
};

double cfl_max_dt(const GridSpec& grid, const ModelSpec& model);
CflReport validate_cfl(const GridSpec& grid, const ModelSpec& model);

} // namespace lpfp
