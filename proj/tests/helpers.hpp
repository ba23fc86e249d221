#pragma once

#include <random>

#include <Eigen/Core>

#include "lpfp/model.hpp"

namespace lpfp::testing {

// Stopping model with constant coefficients and constant rewards.
inline ModelSpec constant_model(double b, double sigma, double f = 0.0, double g = 0.0,
                                ProblemKind kind = ProblemKind::stopping) {
    ModelSpec model;
    model.name = "constant";
    model.kind = kind;
    model.drift = [b](double, double, double) { return b; };
    model.volatility = [sigma](double, double) { return sigma; };
    model.running_coupling = [](const GridSpec& grid, const Eigen::VectorXd&) {
        return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.n_s + 1)).eval();
    };
    model.running_reward = [f](double, double, double, double) { return f; };
    model.exit_statistics = [](const ExitAtoms&) { return Eigen::VectorXd(); };
    model.terminal_reward = [g](double, double, const Eigen::VectorXd&) { return g; };
    model.initial_density = [](double) { return 1.0; };
    model.domain_lo = 0.0;
    model.domain_hi = 1.0;
    return model;
}

// Nonnegative weights summing to `total`.
inline Eigen::VectorXd random_masses(std::mt19937_64& rng, Eigen::Index n, double total = 1.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = u(rng);
    return w * (total / w.sum());
}

} // namespace lpfp::testing
