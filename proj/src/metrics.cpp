#include "lpfp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "lpfp/errors.hpp"
#include "lpfp/transport.hpp"

namespace lpfp {

double DiscreteSubprob::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

double w1_prime(const DiscreteSubprob& a, const DiscreteSubprob& b, double x0) {
    if (a.x.size() != a.mass.size() || b.x.size() != b.mass.size())
        throw std::invalid_argument("w1_prime: atom arrays differ in length");
    // Sides are accumulated separately so that a == b gives exactly zero.
    std::map<double, std::pair<double, double>> atoms;
    for (std::size_t n = 0; n < a.x.size(); ++n) atoms[a.x[n]].first += a.mass[n];
    for (std::size_t n = 0; n < b.x.size(); ++n) atoms[b.x[n]].second += b.mass[n];
    Eigen::VectorXd nodes(static_cast<Eigen::Index>(atoms.size()));
    Eigen::VectorXd ma(nodes.size()), mb(nodes.size());
    Eigen::Index k = 0;
    for (const auto& [x, v] : atoms) {
        nodes(k) = x;
        ma(k) = v.first;
        mb(k) = v.second;
        ++k;
    }
    return w1_prime_on_nodes(nodes, ma, mb, x0);
}

namespace {

Eigen::VectorXd state_nodes(const GridSpec& grid) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(grid.n_s + 1));
    for (std::size_t j = 0; j <= grid.n_s; ++j) x(static_cast<Eigen::Index>(j)) = grid.state(j);
    return x;
}

double distance(double t1, double x1, double t2, double x2) { return std::hypot(t1 - t2, x1 - x2); }

} // namespace

double d_m_metric(const Eigen::MatrixXd& flow_a, const Eigen::MatrixXd& flow_b, const GridSpec& grid, double x0) {
    if (flow_a.rows() != flow_b.rows() || flow_a.cols() != flow_b.cols() ||
        static_cast<std::size_t>(flow_a.rows()) != grid.n_t || static_cast<std::size_t>(flow_a.cols()) != grid.n_s + 1)
        throw std::invalid_argument("d_m_metric: flows must be n_t x (n_s + 1) on the same grid");
    const Eigen::VectorXd nodes = state_nodes(grid);
    double total = 0.0;
    for (Eigen::Index i = 0; i < flow_a.rows(); ++i)
        total += w1_prime_on_nodes(nodes, flow_a.row(i).transpose(), flow_b.row(i).transpose(), x0);
    return grid.delta_t * total;
}

double d_m_metric(const Support& support, const Eigen::VectorXd& m_a, const Eigen::VectorXd& m_b,
                  const GridSpec& grid, double x0) {
    return d_m_metric(state_marginals(support, m_a), state_marginals(support, m_b), grid, x0);
}

double w1_transport(const ExitAtoms& a, const ExitAtoms& b) {
    const double ma = std::accumulate(a.mass.begin(), a.mass.end(), 0.0);
    const double mb = std::accumulate(b.mass.begin(), b.mass.end(), 0.0);
    if (std::abs(ma - mb) > 1e-9) throw std::invalid_argument("w1_transport: total masses differ");
    std::vector<std::size_t> pa, pb;
    for (std::size_t n = 0; n < a.size(); ++n)
        if (a.mass[n] > 0.0) pa.push_back(n);
    for (std::size_t n = 0; n < b.size(); ++n)
        if (b.mass[n] > 0.0) pb.push_back(n);
    if (pa.empty() || pb.empty()) return 0.0;

    const auto na = static_cast<Eigen::Index>(pa.size());
    const auto nb = static_cast<Eigen::Index>(pb.size());
    Eigen::VectorXd supply(na), demand(nb);
    Eigen::MatrixXd cost(na, nb);
    for (Eigen::Index p = 0; p < na; ++p) {
        const std::size_t u = pa[static_cast<std::size_t>(p)];
        supply(p) = a.mass[u];
        for (Eigen::Index q = 0; q < nb; ++q) {
            const std::size_t v = pb[static_cast<std::size_t>(q)];
            cost(p, q) = distance(a.t[u], a.x[u], b.t[v], b.x[v]);
        }
    }
    for (Eigen::Index q = 0; q < nb; ++q) demand(q) = b.mass[pb[static_cast<std::size_t>(q)]];
    return solve_transport(supply, demand, cost).cost;
}

W1Estimate w1_exit(const Support& support, const Eigen::VectorXd& mu_a, const Eigen::VectorXd& mu_b,
                   const GridSpec& grid, std::size_t max_exact_atoms) {
    if (static_cast<std::size_t>(mu_a.size()) != support.mu_size() || mu_a.size() != mu_b.size())
        throw std::invalid_argument("w1_exit: exit measures do not match the support");
    const Eigen::VectorXd diff = mu_a - mu_b;
    if (std::abs(diff.sum()) > 1e-9) throw std::invalid_argument("w1_exit: total masses differ");

    ExitAtoms pos, neg;
    for (std::size_t idx = 0; idx < support.mu_size(); ++idx) {
        const double d = diff(static_cast<Eigen::Index>(idx));
        if (d == 0.0) continue;
        const auto [i, j] = support.mu_node(idx);
        ExitAtoms& side = d > 0.0 ? pos : neg;
        side.t.push_back(grid.time(i));
        side.x.push_back(grid.state(j));
        side.mass.push_back(std::abs(d));
    }
    if (pos.size() <= max_exact_atoms && neg.size() <= max_exact_atoms) return {w1_transport(pos, neg), true};

    // Path through the support with short steps: for a full grid, slices in
    // time order with the state direction alternating; for the parabolic
    // boundary, up the left wall, across the terminal slice, down the right
    // wall. The path metric dominates the Euclidean one, so the flow cost
    // along it bounds W1 from above.
    std::vector<std::size_t> order;
    order.reserve(support.mu_size());
    if (support.kind() == ProblemKind::stopping) {
        for (std::size_t i = 0; i <= grid.n_t; ++i) {
            std::vector<std::size_t> slice;
            for (std::size_t j = 0; j <= grid.n_s; ++j) slice.push_back(support.mu_index(i, j));
            if (i % 2 == 1) std::reverse(slice.begin(), slice.end());
            order.insert(order.end(), slice.begin(), slice.end());
        }
    } else {
        for (std::size_t i = 0; i < grid.n_t; ++i) order.push_back(support.mu_index(i, 0));
        for (std::size_t j = 0; j <= grid.n_s; ++j) order.push_back(support.mu_index(grid.n_t, j));
        for (std::size_t i = grid.n_t; i-- > 0;) order.push_back(support.mu_index(i, grid.n_s));
    }
    double carried = 0.0;
    double cost = 0.0;
    for (std::size_t n = 0; n + 1 < order.size(); ++n) {
        carried += diff(static_cast<Eigen::Index>(order[n]));
        const auto [i1, j1] = support.mu_node(order[n]);
        const auto [i2, j2] = support.mu_node(order[n + 1]);
        cost += std::abs(carried) * distance(grid.time(i1), grid.state(j1), grid.time(i2), grid.state(j2));
    }
    return {cost, false};
}

double weighted_tv(const Support& support, const Eigen::VectorXd& mu_a, const Eigen::VectorXd& mu_b,
                   const GridSpec& grid, double p) {
    if (static_cast<std::size_t>(mu_a.size()) != support.mu_size() || mu_a.size() != mu_b.size())
        throw std::invalid_argument("weighted_tv: exit measures do not match the support");
    Eigen::VectorXd x(mu_a.size());
    for (std::size_t idx = 0; idx < support.mu_size(); ++idx)
        x(static_cast<Eigen::Index>(idx)) = grid.state(support.mu_node(idx).second);
    return weighted_tv(x, mu_a, mu_b, p);
}

} // namespace lpfp
