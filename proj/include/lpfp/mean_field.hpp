#pragma once

#include <cstddef>
#include <utility>

#include <Eigen/Core>

#include "lpfp/grid.hpp"

namespace lpfp {

enum class ProblemKind { stopping, control_absorption };

/// Index maps between flat measure vectors and grid nodes.
///
/// Exit measure (mu) support:
///   stopping: every node (i, j), flattened as i * (n_s + 1) + j.
///   control:  the parabolic boundary. For i < n_t the two nodes j = 0 and
///             j = n_s at 2i and 2i + 1, then the terminal slice at 2 n_t + j.
/// Occupation flow (m) support: i < n_t, interior j, every action k,
/// flattened as ((i * (n_s - 1)) + (j - 1)) * n_a + k.
class Support {
public:
    Support(const GridSpec& grid, ProblemKind kind);

    ProblemKind kind() const { return kind_; }
    std::size_t n_t() const { return n_t_; }
    std::size_t n_s() const { return n_s_; }
    std::size_t n_a() const { return n_a_; }

    std::size_t mu_size() const { return mu_size_; }
    std::size_t m_size() const { return n_t_ * (n_s_ - 1) * n_a_; }

    bool has_mu(std::size_t i, std::size_t j) const;
    // Requires has_mu(i, j).
    std::size_t mu_index(std::size_t i, std::size_t j) const;
    std::pair<std::size_t, std::size_t> mu_node(std::size_t index) const;

    std::size_t m_index(std::size_t i, std::size_t j, std::size_t k) const {
        return ((i * (n_s_ - 1)) + (j - 1)) * n_a_ + k;
    }

    bool operator==(const Support&) const = default;

private:
    ProblemKind kind_;
    std::size_t n_t_;
    std::size_t n_s_;
    std::size_t n_a_;
    std::size_t mu_size_;
};

/// A pair (mu, m): exit measure and occupation flow on the support above.
struct MeanField {
    Eigen::VectorXd mu;
    Eigen::VectorXd m;

    static MeanField zeros(const Support& support) {
        return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(support.mu_size())),
                Eigen::VectorXd::Zero(static_cast<Eigen::Index>(support.m_size()))};
    }
};

bool matches(const Support& support, const MeanField& field);

/// State marginal of the flow: rows are times i < n_t, columns nodes j in
/// [0, n_s] (boundary columns are always zero).
Eigen::MatrixXd state_marginals(const Support& support, const Eigen::VectorXd& m);

/// Exit measure spread on the full (n_t + 1) x (n_s + 1) node grid.
Eigen::MatrixXd exit_on_grid(const Support& support, const Eigen::VectorXd& mu);

/// wa * a + wb * b, entrywise.
MeanField combine(const MeanField& a, double wa, const MeanField& b, double wb);

} // namespace lpfp
