#include "lpfp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpfp {

namespace {

void check_node(const GridSpec& grid, std::size_t i, std::size_t j, std::size_t k) {
    if (i >= grid.n_t) throw std::out_of_range("transition: time index must be below n_t");
    if (!grid.is_interior(j)) throw std::out_of_range("transition: boundary nodes are absorbing");
    if (k >= grid.n_actions()) throw std::out_of_range("transition: action index out of range");
}

} // namespace

TransitionTriple transition(const GridSpec& grid, const ModelSpec& model, std::size_t i, std::size_t j,
                            std::size_t k) {
    check_node(grid, i, j, k);
    const double t = grid.time(i);
    const double x = grid.state(j);
    const double sigma = model.volatility(t, x);
    const double b = model.drift(t, x, grid.action(k));
    const double dt = grid.delta_t;
    const double dx = grid.delta_x;
    const double diffusion = 0.5 * sigma * sigma * dt / (dx * dx);
    const double b_plus = std::max(b, 0.0);
    const double b_minus = -std::min(b, 0.0);
    TransitionTriple p;
    p.up = diffusion + b_plus * dt / dx;
    p.down = diffusion + b_minus * dt / dx;
    p.stay = 1.0 - sigma * sigma * dt / (dx * dx) - std::abs(b) * dt / dx;
    return p;
}

TransitionTable::TransitionTable(const GridSpec& grid, const ModelSpec& model)
    : support_(grid, model.kind), triples_(support_.m_size()) {
    for (std::size_t i = 0; i < grid.n_t; ++i)
        for (std::size_t j = 1; j < grid.n_s; ++j)
            for (std::size_t k = 0; k < grid.n_actions(); ++k)
                triples_[support_.m_index(i, j, k)] = transition(grid, model, i, j, k);
}

double apply_discrete_generator(const GridSpec& grid, const ModelSpec& model, const Eigen::MatrixXd& u,
                                std::size_t i, std::size_t j, std::size_t k) {
    check_node(grid, i, j, k);
    if (static_cast<std::size_t>(u.rows()) != grid.n_t + 1 || static_cast<std::size_t>(u.cols()) != grid.n_s + 1)
        throw std::invalid_argument("apply_discrete_generator: u must be (n_t + 1) x (n_s + 1)");
    const auto r = static_cast<Eigen::Index>(i);
    const auto c = static_cast<Eigen::Index>(j);
    const double t = grid.time(i);
    const double x = grid.state(j);
    const double sigma = model.volatility(t, x);
    const double b = model.drift(t, x, grid.action(k));
    const double dt = grid.delta_t;
    const double dx = grid.delta_x;

    const double time_part = (u(r + 1, c) - u(r, c)) / dt;
    const double up_part = std::max(b, 0.0) * (u(r + 1, c + 1) - u(r + 1, c)) / dx;
    const double down_part = std::min(b, 0.0) * (u(r + 1, c) - u(r + 1, c - 1)) / dx;
    const double second_part =
        0.5 * sigma * sigma * (u(r + 1, c + 1) + u(r + 1, c - 1) - 2.0 * u(r + 1, c)) / (dx * dx);
    return time_part + up_part + down_part + second_part;
}

} // namespace lpfp
