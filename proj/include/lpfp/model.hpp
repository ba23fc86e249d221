#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lpfp/grid.hpp"
#include "lpfp/mean_field.hpp"

namespace lpfp {

/// Atoms of an exit measure: exit time, exit state and mass.
struct ExitAtoms {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> mass;

    std::size_t size() const { return mass.size(); }
};

ExitAtoms exit_atoms(const GridSpec& grid, const Support& support, const Eigen::VectorXd& mu);

/// Coefficients, rewards and initial law of a mean-field game.
///
/// The population enters the rewards only through model-declared statistics:
/// `running_coupling` reduces a state-marginal slice (masses on x_0..x_{n_s})
/// to one value per state node, and `exit_statistics` reduces the exit measure
/// to a small vector. Both are evaluated once per slice / once per mean field.
struct ModelSpec {
    std::string name;
    ProblemKind kind = ProblemKind::stopping;

    // b(t, x, a); the action argument is 0 for stopping problems.
    std::function<double(double t, double x, double a)> drift;
    // sigma(t, x) >= 0.
    std::function<double(double t, double x)> volatility;

    std::function<Eigen::VectorXd(const GridSpec&, const Eigen::VectorXd& slice)> running_coupling;
    // f(t, x, a, coupling value at x).
    std::function<double(double t, double x, double a, double coupling)> running_reward;

    std::function<Eigen::VectorXd(const ExitAtoms&)> exit_statistics;
    // g(t, x, statistics of mu).
    std::function<double(double t, double x, const Eigen::VectorXd& stats)> terminal_reward;

    // Density of the initial law (need not be normalized).
    std::function<double(double x)> initial_density;

    double growth_p = 1.0;

    // Used for the default state bounds of problems posed on the whole line.
    double initial_mean = 0.0;
    double initial_std = 1.0;
    double drift_bound = 0.0;
    // Fixed domain for absorption problems.
    double domain_lo = 0.0;
    double domain_hi = 0.0;
};

/// Numeric overrides accepted by the built-in registry.
struct ModelParams {
    double drift_scale = 1.0;
    // Weight of the exponential interaction kernel (control example).
    double kernel_weight = 10.0;
    // Variance of the initial Gaussian law; negative selects the model default.
    double variance = -1.0;
};

/// Names: "os_example" (optimal stopping) and "control_example" (control with
/// absorption on ]-2, 2[). Throws std::invalid_argument for anything else.
ModelSpec builtin_model(const std::string& name, const ModelParams& params = {});
std::vector<std::string> builtin_model_names();

/// Default grid for a built-in model. Stopping problems get
/// mean +- 5 std +- |b| T; absorption problems use their domain.
GridSpec default_grid(const ModelSpec& model, std::size_t n_t, std::size_t n_s, std::size_t n_a);

/// Initial masses on interior nodes j = 1..n_s-1 (index j - 1).
struct DiscreteInitialLaw {
    Eigen::VectorXd masses;

    double at(std::size_t j) const { return masses(static_cast<Eigen::Index>(j - 1)); }
};

DiscreteInitialLaw discretize_initial(const ModelSpec& model, const GridSpec& grid);

/// Reward tables for a frozen mean field, laid out like the mean-field
/// vectors: `terminal` indexed as mu, `running` as m.
struct RewardTables {
    Eigen::VectorXd terminal;
    Eigen::VectorXd running;
};

RewardTables precompute_reward_tables(const ModelSpec& model, const GridSpec& grid, const Support& support,
                                      const MeanField& mean_field);

/// Running reward at (t_i, x_j, a_k) against a state-marginal slice.
double running_reward_at(const ModelSpec& model, const GridSpec& grid, std::size_t i, std::size_t j,
                         const Eigen::VectorXd& slice, double a);

/// Throws std::invalid_argument when the model and grid disagree on whether
/// actions exist.
void check_compatible(const GridSpec& grid, const ModelSpec& model);

} // namespace lpfp
