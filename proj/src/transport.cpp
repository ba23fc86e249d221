#include "lpfp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpfp/errors.hpp"

namespace lpfp {

namespace {

using Index = Eigen::Index;

// Nodes 0..n-1 are sources, n..n+m-1 sinks. The tree is rebuilt after every
// pivot: O(n + m), negligible next to pricing.
class TransportSimplex {
public:
    TransportSimplex(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand, const Eigen::MatrixXd& cost)
        : n_(supply.size()), m_(demand.size()), cost_(cost), supply_(supply), demand_(demand),
          tolerance_(1e-12 * (1.0 + cost.cwiseAbs().maxCoeff())) {}

    TransportPlan run() {
        perturb();
        northwest_corner();
        rebuild_tree();
        const std::size_t limit = 50 * static_cast<std::size_t>((n_ + 1) * (m_ + 1));
        std::size_t pivots = 0;
        Index cursor = 0;
        while (true) {
            const auto [p, q] = price(cursor);
            if (p < 0) break;
            if (++pivots > limit) throw SolverError("transport simplex: pivot limit reached");
            pivot(p, q);
            rebuild_tree();
        }
        TransportPlan plan;
        plan.arcs = exact_flows();
        plan.pivots = pivots;
        for (const TransportArc& a : plan.arcs) plan.cost += a.flow * cost_(a.source, a.sink);
        return plan;
    }

private:
    void perturb() {
        // Orden's perturbation: eps on every supply, n * eps on the last demand.
        double smallest = std::numeric_limits<double>::infinity();
        for (Index p = 0; p < n_; ++p)
            if (supply_(p) > 0.0) smallest = std::min(smallest, supply_(p));
        for (Index q = 0; q < m_; ++q)
            if (demand_(q) > 0.0) smallest = std::min(smallest, demand_(q));
        if (!std::isfinite(smallest)) smallest = 1.0;
        const double eps = smallest * 1e-7 / static_cast<double>(n_ + m_);
        work_supply_ = supply_.array() + eps;
        work_demand_ = demand_;
        work_demand_(m_ - 1) += eps * static_cast<double>(n_);
    }

    void northwest_corner() {
        Eigen::VectorXd s = work_supply_, d = work_demand_;
        Index p = 0, q = 0;
        arcs_.clear();
        while (p < n_ && q < m_) {
            const double f = std::min(s(p), d(q));
            arcs_.push_back({p, q, f});
            s(p) -= f;
            d(q) -= f;
            if (p == n_ - 1) {
                ++q;
            } else if (q == m_ - 1) {
                ++p;
            } else if (s(p) <= d(q)) {
                ++p;
            } else {
                ++q;
            }
        }
    }

    void rebuild_tree() {
        const Index nodes = n_ + m_;
        const auto un = static_cast<std::size_t>(nodes);
        // Adjacency in compressed form: arcs of node v are incident_[start_[v] .. start_[v + 1]).
        start_.assign(un + 1, 0);
        for (const TransportArc& a : arcs_) {
            ++start_[static_cast<std::size_t>(a.source) + 1];
            ++start_[static_cast<std::size_t>(n_ + a.sink) + 1];
        }
        for (std::size_t v = 0; v < un; ++v) start_[v + 1] += start_[v];
        incident_.resize(2 * arcs_.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t e = 0; e < arcs_.size(); ++e) {
            incident_[fill[static_cast<std::size_t>(arcs_[e].source)]++] = e;
            incident_[fill[static_cast<std::size_t>(n_ + arcs_[e].sink)]++] = e;
        }
        parent_arc_.assign(un, npos);
        depth_.assign(un, -1);
        potential_.assign(un, 0.0);
        queue_.clear();
        queue_.push_back(0);
        depth_[0] = 0;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const Index v = queue_[head];
            const auto uv = static_cast<std::size_t>(v);
            for (std::size_t s = start_[uv]; s < start_[uv + 1]; ++s) {
                const std::size_t e = incident_[s];
                const Index w = other(e, v);
                const auto uw = static_cast<std::size_t>(w);
                if (depth_[uw] >= 0) continue;
                depth_[uw] = depth_[uv] + 1;
                parent_arc_[uw] = e;
                // u_p + v_q = c_pq on tree arcs.
                potential_[uw] = cost_(arcs_[e].source, arcs_[e].sink) - potential_[uv];
                queue_.push_back(w);
            }
        }
        if (static_cast<Index>(queue_.size()) != nodes) throw SolverError("transport simplex: basis is not a tree");
    }

    Index other(std::size_t e, Index v) const {
        return v < n_ ? n_ + arcs_[e].sink : arcs_[e].source;
    }

    // Most negative reduced cost within a block of sources, scanning
    // cyclically from the cursor; (-1, -1) when optimal.
    std::pair<Index, Index> price(Index& cursor) {
        const Index block = std::max<Index>(1, n_ / 8);
        const double tol = tolerance_;
        double best = -tol;
        std::pair<Index, Index> entering{-1, -1};
        for (Index scanned = 0; scanned < n_; ++scanned) {
            const Index p = (cursor + scanned) % n_;
            const double up = potential_[static_cast<std::size_t>(p)];
            const double* row = cost_.data() + p * m_;
            const double* vq = potential_.data() + n_;
            for (Index q = 0; q < m_; ++q) {
                const double r = row[q] - up - vq[q];
                if (r < best) {
                    best = r;
                    entering = {p, q};
                }
            }
            if (entering.first >= 0 && scanned + 1 >= block) {
                cursor = (p + 1) % n_;
                return entering;
            }
        }
        return entering;
    }

    void pivot(Index p, Index q) {
        // Tree path from sink q to source p; the entering arc closes the cycle.
        Index a = n_ + q, b = p;
        std::vector<std::size_t> from_sink, from_source;
        while (a != b) {
            if (depth_[static_cast<std::size_t>(a)] >= depth_[static_cast<std::size_t>(b)]) {
                const std::size_t e = parent_arc_[static_cast<std::size_t>(a)];
                from_sink.push_back(e);
                a = other(e, a);
            } else {
                const std::size_t e = parent_arc_[static_cast<std::size_t>(b)];
                from_source.push_back(e);
                b = other(e, b);
            }
        }
        std::vector<std::size_t> path = from_sink;
        path.insert(path.end(), from_source.rbegin(), from_source.rend());

        // Along the path from q to p signs alternate -, +, -, ...
        double theta = std::numeric_limits<double>::infinity();
        std::size_t leaving = npos;
        for (std::size_t s = 0; s < path.size(); s += 2)
            if (arcs_[path[s]].flow < theta) {
                theta = arcs_[path[s]].flow;
                leaving = path[s];
            }
        for (std::size_t s = 0; s < path.size(); ++s) arcs_[path[s]].flow += (s % 2 == 0 ? -theta : theta);
        arcs_[leaving] = {p, q, theta};
    }

    // Flows on the final tree for the unperturbed supplies, by peeling leaves.
    std::vector<TransportArc> exact_flows() const {
        const Index nodes = n_ + m_;
        std::vector<double> remaining(static_cast<std::size_t>(nodes));
        for (Index p = 0; p < n_; ++p) remaining[static_cast<std::size_t>(p)] = supply_(p);
        for (Index q = 0; q < m_; ++q) remaining[static_cast<std::size_t>(n_ + q)] = demand_(q);
        std::vector<int> degree(static_cast<std::size_t>(nodes), 0);
        for (Index v = 0; v < nodes; ++v)
            degree[static_cast<std::size_t>(v)] =
                static_cast<int>(start_[static_cast<std::size_t>(v) + 1] - start_[static_cast<std::size_t>(v)]);
        std::vector<bool> done(arcs_.size(), false);
        std::vector<TransportArc> out = arcs_;
        std::vector<Index> leaves;
        for (Index v = 0; v < nodes; ++v)
            if (degree[static_cast<std::size_t>(v)] == 1) leaves.push_back(v);
        while (!leaves.empty()) {
            const Index v = leaves.back();
            leaves.pop_back();
            if (degree[static_cast<std::size_t>(v)] != 1) continue;
            std::size_t e = npos;
            for (std::size_t s = start_[static_cast<std::size_t>(v)]; s < start_[static_cast<std::size_t>(v) + 1]; ++s)
                if (!done[incident_[s]]) e = incident_[s];
            done[e] = true;
            const double f = std::max(0.0, remaining[static_cast<std::size_t>(v)]);
            out[e].flow = f;
            const Index w = other(e, v);
            remaining[static_cast<std::size_t>(w)] -= f;
            degree[static_cast<std::size_t>(v)] = 0;
            if (--degree[static_cast<std::size_t>(w)] == 1) leaves.push_back(w);
        }
        return out;
    }

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    Index n_, m_;
    // Row-major so pricing a source walks contiguous memory.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cost_;
    Eigen::VectorXd supply_, demand_, work_supply_, work_demand_;
    double tolerance_;
    std::vector<TransportArc> arcs_;
    std::vector<std::size_t> start_, incident_;
    std::vector<Index> queue_;
    std::vector<std::size_t> parent_arc_;
    std::vector<Index> depth_;
    std::vector<double> potential_;
};

} // namespace

TransportPlan solve_transport(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                              const Eigen::MatrixXd& cost) {
    if (supply.size() == 0 || demand.size() == 0) throw std::invalid_argument("solve_transport: empty side");
    if (cost.rows() != supply.size() || cost.cols() != demand.size())
        throw std::invalid_argument("solve_transport: cost matrix shape");
    if (supply.minCoeff() < 0.0 || demand.minCoeff() < 0.0)
        throw std::invalid_argument("solve_transport: negative mass");
    const double scale = std::max(1.0, supply.sum());
    if (std::abs(supply.sum() - demand.sum()) > 1e-9 * scale)
        throw std::invalid_argument("solve_transport: supply and demand differ");
    return TransportSimplex(supply, demand, cost).run();
}

} // namespace lpfp
