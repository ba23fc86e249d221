#include "lpfp/mean_field.hpp"

#include <stdexcept>

namespace lpfp {

Support::Support(const GridSpec& grid, ProblemKind kind)
    : kind_(kind), n_t_(grid.n_t), n_s_(grid.n_s), n_a_(grid.n_actions()) {
    if (kind == ProblemKind::stopping && grid.has_actions())
        throw std::invalid_argument("support: stopping problems take no action grid");
    if (kind == ProblemKind::control_absorption && !grid.has_actions())
        throw std::invalid_argument("support: control problems need an action grid");
    mu_size_ = kind == ProblemKind::stopping ? (n_t_ + 1) * (n_s_ + 1) : 2 * n_t_ + n_s_ + 1;
}

bool Support::has_mu(std::size_t i, std::size_t j) const {
    if (i > n_t_ || j > n_s_) return false;
    if (kind_ == ProblemKind::stopping) return true;
    return i == n_t_ || j == 0 || j == n_s_;
}

std::size_t Support::mu_index(std::size_t i, std::size_t j) const {
    if (!has_mu(i, j)) throw std::out_of_range("support: node carries no exit mass");
    if (kind_ == ProblemKind::stopping) return i * (n_s_ + 1) + j;
    if (i == n_t_) return 2 * n_t_ + j;
    return 2 * i + (j == 0 ? 0 : 1);
}

std::pair<std::size_t, std::size_t> Support::mu_node(std::size_t index) const {
    if (index >= mu_size_) throw std::out_of_range("support: exit index out of range");
    if (kind_ == ProblemKind::stopping) return {index / (n_s_ + 1), index % (n_s_ + 1)};
    if (index >= 2 * n_t_) return {n_t_, index - 2 * n_t_};
    return {index / 2, index % 2 == 0 ? 0 : n_s_};
}

bool matches(const Support& support, const MeanField& field) {
    return static_cast<std::size_t>(field.mu.size()) == support.mu_size() &&
           static_cast<std::size_t>(field.m.size()) == support.m_size();
}

Eigen::MatrixXd state_marginals(const Support& support, const Eigen::VectorXd& m) {
    if (static_cast<std::size_t>(m.size()) != support.m_size())
        throw std::invalid_argument("state_marginals: flow size does not match support");
    const auto n_t = static_cast<Eigen::Index>(support.n_t());
    const auto n_s = support.n_s();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_t, static_cast<Eigen::Index>(n_s + 1));
    for (std::size_t i = 0; i < support.n_t(); ++i)
        for (std::size_t j = 1; j < n_s; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < support.n_a(); ++k) s += m(static_cast<Eigen::Index>(support.m_index(i, j, k)));
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
        }
    return out;
}

Eigen::MatrixXd exit_on_grid(const Support& support, const Eigen::VectorXd& mu) {
    if (static_cast<std::size_t>(mu.size()) != support.mu_size())
        throw std::invalid_argument("exit_on_grid: exit size does not match support");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(support.n_t() + 1),
                                                static_cast<Eigen::Index>(support.n_s() + 1));
    for (std::size_t idx = 0; idx < support.mu_size(); ++idx) {
        const auto [i, j] = support.mu_node(idx);
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mu(static_cast<Eigen::Index>(idx));
    }
    return out;
}

MeanField combine(const MeanField& a, double wa, const MeanField& b, double wb) {
    if (a.mu.size() != b.mu.size() || a.m.size() != b.m.size())
        throw std::invalid_argument("combine: mean-field shapes differ");
    return {wa * a.mu + wb * b.mu, wa * a.m + wb * b.m};
}

} // namespace lpfp
