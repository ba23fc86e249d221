#include "lpfp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseLU>

#include "lpfp/errors.hpp"

namespace lpfp {

const char* to_string(SolveStatus status) {
    switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration-limit";
    }
    return "unknown";
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Eigen::Index;
using Eigen::VectorXd;

// Column q entered at basis position r with FTRAN'd column alpha.
struct Eta {
    Index row;
    double pivot;
    std::vector<std::pair<Index, double>> entries;  // off-pivot nonzeros
};

enum class PhaseResult { optimal, unbounded, iteration_limit };

class RevisedSimplex {
public:
    RevisedSimplex(const SpMat& A, const VectorXd& b, const SimplexOptions& options)
        : A_(A), b_(b), opt_(options), m_(A.rows()), n_(A.cols()) {
        basis_.assign(static_cast<std::size_t>(m_), -1);
        position_.assign(static_cast<std::size_t>(n_ + m_), -1);
    }

    // Singleton columns with a positive entry cover their row; the rest get
    // an artificial.
    void crash() {
        for (Index j = 0; j < n_; ++j) {
            SpMat::InnerIterator it(A_, j);
            if (!it) continue;
            const Index r = it.row();
            const double v = it.value();
            ++it;
            if (it) continue;
            if (v > 0.0 && basis_[static_cast<std::size_t>(r)] < 0) set_basic(r, j);
        }
        for (Index r = 0; r < m_; ++r) {
            if (basis_[static_cast<std::size_t>(r)] >= 0) continue;
            set_basic(r, n_ + r);
            ++num_artificial_;
        }
        refactor();
    }

    std::size_t num_artificial() const { return num_artificial_; }

    PhaseResult run_phase(const VectorXd& cost) {
        cost_ = &cost;
        streak_ = 0;
        bland_ = false;
        for (;;) {
            if (iterations_ >= opt_.max_iterations) return PhaseResult::iteration_limit;
            const VectorXd y = btran(basic_costs());
            const Index q = price(y);
            if (q < 0) return PhaseResult::optimal;
            const VectorXd alpha = ftran(q);
            const Index r = ratio_test(alpha);
            if (r < 0) return PhaseResult::unbounded;
            pivot(q, r, alpha);
        }
    }

    double artificial_sum() const {
        double s = 0.0;
        for (Index r = 0; r < m_; ++r)
            if (basis_[static_cast<std::size_t>(r)] >= n_) s += std::abs(x_basic_(r));
        return s;
    }

    // Pivots zero-level artificials out of the basis where some structural
    // column has a usable entry in their row; the remaining rows are redundant.
    void drive_out_artificials() {
        for (Index r = 0; r < m_; ++r) {
            if (basis_[static_cast<std::size_t>(r)] < n_) continue;
            VectorXd unit = VectorXd::Zero(m_);
            unit(r) = 1.0;
            const VectorXd rho = btran(unit);
            Index best = -1;
            double best_abs = opt_.pivot_tol;
            for (Index j = 0; j < n_; ++j) {
                if (position_[static_cast<std::size_t>(j)] >= 0) continue;
                const double v = std::abs(column_dot(j, rho));
                if (v > best_abs) {
                    best_abs = v;
                    best = j;
                }
            }
            if (best < 0) continue;
            const VectorXd alpha = ftran(best);
            pivot(best, r, alpha);
        }
    }

    void refactor() {
        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(static_cast<std::size_t>(4 * m_));
        for (Index r = 0; r < m_; ++r) {
            const Index col = basis_[static_cast<std::size_t>(r)];
            if (col >= n_) {
                triplets.emplace_back(col - n_, r, 1.0);
            } else {
                for (SpMat::InnerIterator it(A_, col); it; ++it) triplets.emplace_back(it.row(), r, it.value());
            }
        }
        SpMat B(m_, m_);
        B.setFromTriplets(triplets.begin(), triplets.end());
        B.makeCompressed();
        lu_.analyzePattern(B);
        lu_.factorize(B);
        if (lu_.info() != Eigen::Success) throw SingularBasis{};
        etas_.clear();
        x_basic_ = lu_.solve(b_);
    }

    VectorXd primal() const {
        VectorXd x = VectorXd::Zero(n_);
        for (Index r = 0; r < m_; ++r) {
            const Index col = basis_[static_cast<std::size_t>(r)];
            if (col < n_) x(col) = x_basic_(r);
        }
        return x;
    }

    std::vector<Index> basis() const { return basis_; }
    std::size_t iterations() const { return iterations_; }
    std::size_t bland_pivots() const { return bland_pivots_; }

    struct SingularBasis {};

private:
    void set_basic(Index r, Index col) {
        const Index old = basis_[static_cast<std::size_t>(r)];
        if (old >= 0) position_[static_cast<std::size_t>(old)] = -1;
        basis_[static_cast<std::size_t>(r)] = col;
        position_[static_cast<std::size_t>(col)] = r;
    }

    VectorXd basic_costs() const {
        VectorXd cb(m_);
        for (Index r = 0; r < m_; ++r) cb(r) = (*cost_)(basis_[static_cast<std::size_t>(r)]);
        return cb;
    }

    double column_dot(Index j, const VectorXd& y) const {
        double s = 0.0;
        for (SpMat::InnerIterator it(A_, j); it; ++it) s += it.value() * y(it.row());
        return s;
    }

    // Entering column, or -1 at optimality. Artificials never re-enter.
    Index price(const VectorXd& y) const {
        Index best = -1;
        double best_d = opt_.optimality_tol;
        for (Index j = 0; j < n_; ++j) {
            if (position_[static_cast<std::size_t>(j)] >= 0) continue;
            const double d = (*cost_)(j) - column_dot(j, y);
            if (d > best_d) {
                best = j;
                best_d = d;
                if (bland_) break;
            }
        }
        return best;
    }

    VectorXd ftran(Index col) const {
        VectorXd a = VectorXd::Zero(m_);
        if (col >= n_) {
            a(col - n_) = 1.0;
        } else {
            for (SpMat::InnerIterator it(A_, col); it; ++it) a(it.row()) = it.value();
        }
        VectorXd x = lu_.solve(a);
        for (const Eta& eta : etas_) {
            const double xr = x(eta.row) / eta.pivot;
            x(eta.row) = xr;
            if (xr != 0.0)
                for (const auto& [i, v] : eta.entries) x(i) -= v * xr;
        }
        return x;
    }

    VectorXd btran(VectorXd w) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = w(it->row);
            for (const auto& [i, v] : it->entries) s -= w(i) * v;
            w(it->row) = s / it->pivot;
        }
        return lu_.transpose().solve(w);
    }

    Index ratio_test(const VectorXd& alpha) const {
        const double tol = opt_.pivot_tol;
        if (bland_) {
            Index best = -1;
            double best_ratio = 0.0;
            for (Index r = 0; r < m_; ++r) {
                if (alpha(r) <= tol) continue;
                const double ratio = std::max(x_basic_(r), 0.0) / alpha(r);
                if (best < 0 || ratio < best_ratio - 1e-12 ||
                    (ratio <= best_ratio + 1e-12 &&
                     basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(best)])) {
                    best = r;
                    best_ratio = ratio;
                }
            }
            return best;
        }
        // Two-pass (Harris) selection with a small relaxation: bound the step,
        // then take the largest pivot among rows that block within the bound.
        constexpr double relax = 1e-12;
        double bound = std::numeric_limits<double>::infinity();
        for (Index r = 0; r < m_; ++r)
            if (alpha(r) > tol) bound = std::min(bound, (std::max(x_basic_(r), 0.0) + relax) / alpha(r));
        if (!std::isfinite(bound)) return -1;
        Index best = -1;
        for (Index r = 0; r < m_; ++r) {
            if (alpha(r) <= tol) continue;
            if (std::max(x_basic_(r), 0.0) / alpha(r) <= bound && (best < 0 || alpha(r) > alpha(best))) best = r;
        }
        return best;
    }

    void pivot(Index q, Index r, const VectorXd& alpha) {
        const double theta = std::max(x_basic_(r), 0.0) / alpha(r);
        if (theta != 0.0) x_basic_ -= theta * alpha;
        x_basic_(r) = theta;
        Eta eta{r, alpha(r), {}};
        for (Index i = 0; i < m_; ++i)
            if (i != r && alpha(i) != 0.0) eta.entries.emplace_back(i, alpha(i));
        etas_.push_back(std::move(eta));
        set_basic(r, q);
        ++iterations_;
        if (bland_) ++bland_pivots_;

        if (theta <= 1e-12) {
            if (++streak_ >= opt_.degenerate_streak) bland_ = true;
        } else {
            streak_ = 0;
            bland_ = false;
        }
        if (etas_.size() >= opt_.refactor_interval) refactor();
    }

    const SpMat& A_;
    const VectorXd& b_;
    SimplexOptions opt_;
    Index m_;
    Index n_;
    std::vector<Index> basis_;
    std::vector<Index> position_;
    std::size_t num_artificial_ = 0;
    VectorXd x_basic_;
    mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
    std::vector<Eta> etas_;
    const VectorXd* cost_ = nullptr;
    std::size_t iterations_ = 0;
    std::size_t streak_ = 0;
    std::size_t bland_pivots_ = 0;
    bool bland_ = false;
};

} // namespace

LPSolution solve_standard_form(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& c, const SimplexOptions& options) {
    if (A.rows() == 0 || A.cols() == 0) throw std::invalid_argument("solve_lp: empty program");
    if (b.size() != A.rows() || c.size() != A.cols())
        throw std::invalid_argument("solve_lp: dimension mismatch");

    // Row signs flipped so that every right-hand side is nonnegative.
    SpMat An = A;
    An.makeCompressed();
    VectorXd bn = b;
    {
        Eigen::VectorXd sign = Eigen::VectorXd::Ones(A.rows());
        for (Index r = 0; r < A.rows(); ++r)
            if (b(r) < 0.0) sign(r) = -1.0;
        An = sign.asDiagonal() * An;
        bn = sign.cwiseProduct(b);
    }

    LPSolution sol;
    RevisedSimplex simplex(An, bn, options);
    std::ostringstream diag;
    try {
        simplex.crash();
        const Index n = A.cols();
        const Index m = A.rows();
        bool feasible = true;
        if (simplex.num_artificial() > 0) {
            VectorXd phase1 = VectorXd::Zero(n + m);
            phase1.tail(m).setConstant(-1.0);
            const PhaseResult r1 = simplex.run_phase(phase1);
            simplex.refactor();
            const double infeas = simplex.artificial_sum();
            diag << "phase 1: " << simplex.num_artificial() << " artificials, " << simplex.iterations()
                 << " pivots; ";
            if (r1 == PhaseResult::iteration_limit) {
                sol.status = SolveStatus::iteration_limit;
                feasible = false;
            } else if (infeas > options.feasibility_tol * (1.0 + bn.lpNorm<Eigen::Infinity>())) {
                sol.status = SolveStatus::infeasible;
                diag << "artificial mass " << infeas << " remains; ";
                feasible = false;
            } else {
                simplex.drive_out_artificials();
            }
        }
        if (feasible) {
            VectorXd phase2 = VectorXd::Zero(n + m);
            phase2.head(n) = c;
            const PhaseResult r2 = simplex.run_phase(phase2);
            simplex.refactor();
            switch (r2) {
            case PhaseResult::optimal: sol.status = SolveStatus::optimal; break;
            case PhaseResult::unbounded: sol.status = SolveStatus::unbounded; break;
            case PhaseResult::iteration_limit: sol.status = SolveStatus::iteration_limit; break;
            }
        }
    } catch (const RevisedSimplex::SingularBasis&) {
        throw SolverError("solve_lp: basis factorization failed");
    }

    sol.values = simplex.primal();
    sol.objective_value = c.dot(sol.values);
    sol.residual_norm = (A * sol.values - b).lpNorm<Eigen::Infinity>();
    sol.iterations = simplex.iterations();
    sol.basis = simplex.basis();
    diag << "pivots " << simplex.iterations() << ", bland pivots "
         << simplex.bland_pivots() << ", residual " << sol.residual_norm;
    sol.diagnostics = diag.str();
    return sol;
}

} // namespace lpfp
