#include "lpfp/model.hpp"

#include <cmath>
#include <stdexcept>

namespace lpfp {

ExitAtoms exit_atoms(const GridSpec& grid, const Support& support, const Eigen::VectorXd& mu) {
    if (static_cast<std::size_t>(mu.size()) != support.mu_size())
        throw std::invalid_argument("exit_atoms: exit size does not match support");
    ExitAtoms atoms;
    atoms.t.reserve(support.mu_size());
    atoms.x.reserve(support.mu_size());
    atoms.mass.reserve(support.mu_size());
    for (std::size_t idx = 0; idx < support.mu_size(); ++idx) {
        const auto [i, j] = support.mu_node(idx);
        atoms.t.push_back(grid.time(i));
        atoms.x.push_back(grid.state(j));
        atoms.mass.push_back(mu(static_cast<Eigen::Index>(idx)));
    }
    return atoms;
}

namespace {

double gaussian_density(double x, double mean, double variance) {
    const double z = x - mean;
    return std::exp(-0.5 * z * z / variance);
}

ModelSpec os_example(const ModelParams& params) {
    const double variance = params.variance > 0.0 ? params.variance : 4.0;
    const double scale = params.drift_scale;
    ModelSpec m;
    m.name = "os_example";
    m.kind = ProblemKind::stopping;
    m.drift = [scale](double, double, double) { return scale; };
    m.volatility = [](double, double) { return 1.0; };
    // int (x - y) m(dy) = x * mass - first moment.
    m.running_coupling = [](const GridSpec& grid, const Eigen::VectorXd& slice) {
        double mass = 0.0, moment = 0.0;
        for (Eigen::Index j = 0; j < slice.size(); ++j) {
            mass += slice(j);
            moment += grid.state(static_cast<std::size_t>(j)) * slice(j);
        }
        Eigen::VectorXd c(slice.size());
        for (Eigen::Index j = 0; j < slice.size(); ++j) c(j) = grid.state(static_cast<std::size_t>(j)) * mass - moment;
        return c;
    };
    m.running_reward = [](double, double, double, double coupling) { return coupling; };
    // int (t - s) mu(ds, dy) = t * mass - mean exit time.
    m.exit_statistics = [](const ExitAtoms& atoms) {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(2);
        for (std::size_t n = 0; n < atoms.size(); ++n) {
            s(0) += atoms.mass[n];
            s(1) += atoms.t[n] * atoms.mass[n];
        }
        return s;
    };
    m.terminal_reward = [](double t, double, const Eigen::VectorXd& s) { return t * s(0) - s(1); };
    m.initial_density = [variance](double x) { return gaussian_density(x, 0.0, variance); };
    m.growth_p = 1.0;
    m.initial_mean = 0.0;
    m.initial_std = std::sqrt(variance);
    m.drift_bound = std::abs(scale);
    return m;
}

ModelSpec control_example(const ModelParams& params) {
    const double variance = params.variance > 0.0 ? params.variance : 0.1;
    const double scale = params.drift_scale;
    const double weight = params.kernel_weight;
    constexpr double lo = -2.0, hi = 2.0;
    ModelSpec m;
    m.name = "control_example";
    m.kind = ProblemKind::control_absorption;
    m.drift = [scale](double, double, double a) { return scale * a; };
    m.volatility = [](double, double) { return 1.0; };
    m.running_coupling = [](const GridSpec& grid, const Eigen::VectorXd& slice) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(slice.size());
        for (Eigen::Index j = 0; j < slice.size(); ++j) {
            const double x = grid.state(static_cast<std::size_t>(j));
            double s = 0.0;
            for (Eigen::Index y = 0; y < slice.size(); ++y)
                if (slice(y) != 0.0) s += std::exp(-std::abs(x - grid.state(static_cast<std::size_t>(y)))) * slice(y);
            c(j) = s;
        }
        return c;
    };
    m.running_reward = [weight](double, double x, double a, double kernel) {
        return -weight * kernel - 2.0 * std::abs(std::abs(x) - 1.0) - a * a;
    };
    m.exit_statistics = [](const ExitAtoms&) { return Eigen::VectorXd(); };
    m.terminal_reward = [](double, double x, const Eigen::VectorXd&) { return -std::abs(x); };
    // Truncated to the open domain; discretize_initial renormalizes.
    m.initial_density = [variance](double x) {
        return (x > lo && x < hi) ? gaussian_density(x, 0.0, variance) : 0.0;
    };
    m.growth_p = 1.0;
    m.initial_mean = 0.0;
    m.initial_std = std::sqrt(variance);
    m.drift_bound = std::abs(scale);
    m.domain_lo = lo;
    m.domain_hi = hi;
    return m;
}

} // namespace

ModelSpec builtin_model(const std::string& name, const ModelParams& params) {
    if (name == "os_example") return os_example(params);
    if (name == "control_example") return control_example(params);
    throw std::invalid_argument("unknown problem '" + name + "'");
}

std::vector<std::string> builtin_model_names() { return {"os_example", "control_example"}; }

GridSpec default_grid(const ModelSpec& model, std::size_t n_t, std::size_t n_s, std::size_t n_a) {
    constexpr double horizon = 1.0;
    if (model.kind == ProblemKind::stopping) {
        const double half = 5.0 * model.initial_std + model.drift_bound * horizon;
        return build_grid(horizon, n_t, model.initial_mean - half, model.initial_mean + half, n_s);
    }
    return build_grid(horizon, n_t, model.domain_lo, model.domain_hi, n_s, uniform_actions(-1.0, 1.0, n_a));
}

DiscreteInitialLaw discretize_initial(const ModelSpec& model, const GridSpec& grid) {
    DiscreteInitialLaw law;
    law.masses.resize(static_cast<Eigen::Index>(grid.n_s - 1));
    for (std::size_t j = 1; j < grid.n_s; ++j) {
        const double d = model.initial_density(grid.state(j));
        if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("initial density must be finite and >= 0");
        law.masses(static_cast<Eigen::Index>(j - 1)) = d * grid.delta_x;
    }
    const double total = law.masses.sum();
    if (!(total > 0.0)) throw std::invalid_argument("initial density vanishes on every interior node");
    law.masses /= total;
    return law;
}

RewardTables precompute_reward_tables(const ModelSpec& model, const GridSpec& grid, const Support& support,
                                      const MeanField& mean_field) {
    if (!matches(support, mean_field)) throw std::invalid_argument("reward tables: mean-field shape mismatch");
    RewardTables tables;
    tables.running.resize(static_cast<Eigen::Index>(support.m_size()));
    const Eigen::MatrixXd marginals = state_marginals(support, mean_field.m);
    for (std::size_t i = 0; i < grid.n_t; ++i) {
        const Eigen::VectorXd coupling =
            model.running_coupling(grid, marginals.row(static_cast<Eigen::Index>(i)).transpose());
        const double t = grid.time(i);
        for (std::size_t j = 1; j < grid.n_s; ++j) {
            const double x = grid.state(j);
            const double c = coupling(static_cast<Eigen::Index>(j));
            for (std::size_t k = 0; k < support.n_a(); ++k)
                tables.running(static_cast<Eigen::Index>(support.m_index(i, j, k))) =
                    model.running_reward(t, x, grid.action(k), c);
        }
    }
    const ExitAtoms atoms = exit_atoms(grid, support, mean_field.mu);
    const Eigen::VectorXd stats = model.exit_statistics(atoms);
    tables.terminal.resize(static_cast<Eigen::Index>(support.mu_size()));
    for (std::size_t idx = 0; idx < support.mu_size(); ++idx)
        tables.terminal(static_cast<Eigen::Index>(idx)) = model.terminal_reward(atoms.t[idx], atoms.x[idx], stats);
    return tables;
}

double running_reward_at(const ModelSpec& model, const GridSpec& grid, std::size_t i, std::size_t j,
                         const Eigen::VectorXd& slice, double a) {
    if (static_cast<std::size_t>(slice.size()) != grid.n_s + 1)
        throw std::invalid_argument("running_reward_at: slice must cover every state node");
    const Eigen::VectorXd c = model.running_coupling(grid, slice);
    return model.running_reward(grid.time(i), grid.state(j), a, c(static_cast<Eigen::Index>(j)));
}

void check_compatible(const GridSpec& grid, const ModelSpec& model) {
    if (model.kind == ProblemKind::stopping && grid.has_actions())
        throw std::invalid_argument("stopping model given an action grid");
    if (model.kind == ProblemKind::control_absorption && !grid.has_actions())
        throw std::invalid_argument("control model needs an action grid");
}

} // namespace lpfp
