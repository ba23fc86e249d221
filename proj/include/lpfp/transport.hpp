#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace lpfp {

struct TransportArc {
    Eigen::Index source = 0;
    Eigen::Index sink = 0;
    double flow = 0.0;
};

struct TransportPlan {
    double cost = 0.0;
    // The final spanning-tree basis; zero-flow arcs included.
    std::vector<TransportArc> arcs;
    std::size_t pivots = 0;
};

/// Balanced transportation problem min sum c_pq f_pq over f >= 0 with row sums
/// `supply` and column sums `demand`, by the network simplex on the bipartite
/// spanning tree. Supplies are perturbed during pivoting so that no basis is
/// degenerate; the reported flows are recomputed on the final tree from the
/// unperturbed data. Throws std::invalid_argument on empty or unbalanced input.
TransportPlan solve_transport(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                              const Eigen::MatrixXd& cost);

} // namespace lpfp
