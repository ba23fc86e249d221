#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "lpfp/grid.hpp"
#include "lpfp/mean_field.hpp"
#include "lpfp/model.hpp"

namespace lpfp {

/// Subprobability measure on the real line given by atoms.
struct DiscreteSubprob {
    std::vector<double> x;
    std::vector<double> mass;

    double total() const;
};

/// Wasserstein-type distance between subprobabilities with reference point x0:
/// sup over 1-Lipschitz phi with phi(x0) = 0 of int phi d(a - b), plus
/// |mass(a) - mass(b)|. Evaluated in closed form from tail sums of a - b.
double w1_prime(const DiscreteSubprob& a, const DiscreteSubprob& b, double x0);

/// Same, for two mass vectors on a common sorted node set.
template <typename DerivedX, typename DerivedA, typename DerivedB>
typename DerivedX::Scalar w1_prime_on_nodes(const Eigen::MatrixBase<DerivedX>& nodes,
                                            const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b,
                                            typename DerivedX::Scalar x0) {
    using Scalar = typename DerivedX::Scalar;
    const Eigen::Index n = nodes.size();
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diff = a - b;
    Scalar total = Scalar(0);
    // Right of x0: on (x_{k-1}, x_k] the tail sum over nodes >= x_k.
    Scalar tail = Scalar(0);
    Scalar right = Scalar(0);
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        if (nodes(k) <= x0) break;
        tail += diff(k);
        const Scalar left_end = (k > 0 && nodes(k - 1) > x0) ? nodes(k - 1) : x0;
        right += std::abs(tail) * (nodes(k) - left_end);
    }
    // Left of x0: on [x_k, x_{k+1}) minus the head sum over nodes <= x_k.
    Scalar head = Scalar(0);
    Scalar left = Scalar(0);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (nodes(k) >= x0) break;
        head += diff(k);
        const Scalar right_end = (k + 1 < n && nodes(k + 1) < x0) ? nodes(k + 1) : x0;
        left += std::abs(head) * (right_end - nodes(k));
    }
    total = right + left + std::abs(diff.sum());
    return total;
}

/// Time-integrated W1' between two occupation flows given as state marginals
/// (rows = times i < n_t, columns = nodes j): delta_t * sum_i W1'(row_i, row'_i).
double d_m_metric(const Eigen::MatrixXd& flow_a, const Eigen::MatrixXd& flow_b, const GridSpec& grid, double x0);

/// Flows in mean-field layout; control flows are collapsed to state marginals.
double d_m_metric(const Support& support, const Eigen::VectorXd& m_a, const Eigen::VectorXd& m_b,
                  const GridSpec& grid, double x0);

/// Exact 1-Wasserstein distance with Euclidean ground metric on (t, x), by
/// the transportation simplex. Masses must agree
/// within 1e-9; throws std::invalid_argument otherwise.
double w1_transport(const ExitAtoms& a, const ExitAtoms& b);

struct W1Estimate {
    double value = 0.0;
    // False when the path-ordering upper bound was reported instead.
    bool exact = true;
};

/// W1 between two exit measures on the grid. Common mass cancels first; when
/// either remaining side has more than `max_exact_atoms` atoms, transport is
/// restricted to a path through the support nodes (a time-major snake on the
/// full grid, a walk along the parabolic boundary otherwise) and the path
/// cost, an upper bound on the exact value, is returned with exact = false.
W1Estimate w1_exit(const Support& support, const Eigen::VectorXd& mu_a, const Eigen::VectorXd& mu_b,
                   const GridSpec& grid, std::size_t max_exact_atoms = 400);

/// sum over nodes of (1 + |x|^p) |a - b|.
template <typename DerivedX, typename DerivedA, typename DerivedB>
typename DerivedX::Scalar weighted_tv(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedA>& a,
                                      const Eigen::MatrixBase<DerivedB>& b, typename DerivedX::Scalar p) {
    using Scalar = typename DerivedX::Scalar;
    return ((x.array().abs().pow(p) + Scalar(1)) * (a - b).array().abs()).sum();
}

/// Exit-measure version on the grid.
double weighted_tv(const Support& support, const Eigen::VectorXd& mu_a, const Eigen::VectorXd& mu_b,
                   const GridSpec& grid, double p);

} // namespace lpfp
