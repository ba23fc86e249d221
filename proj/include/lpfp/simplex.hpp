#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace lpfp {

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(SolveStatus status);

struct SimplexOptions {
    // Primal feasibility / final residual tolerance.
    double feasibility_tol = 1e-9;
    // Reduced-cost optimality tolerance.
    double optimality_tol = 1e-10;
    // Smallest pivot magnitude accepted in the ratio test.
    double pivot_tol = 1e-9;
    std::size_t max_iterations = 1'000'000;
    // Pivots between basis refactorizations.
    std::size_t refactor_interval = 100;
    // Consecutive degenerate pivots before switching to Bland's rule.
    std::size_t degenerate_streak = 50;
};

struct LPSolution {
    Eigen::VectorXd values;
    double objective_value = 0.0;
    SolveStatus status = SolveStatus::iteration_limit;
    // ||A x - b||_inf on the original rows.
    double residual_norm = 0.0;
    std::size_t iterations = 0;
    // Column index per row of the final basis; indices >= cols() are artificial.
    std::vector<Eigen::Index> basis;
    std::string diagnostics;
};

/// Maximizes c.x subject to A x = b, x >= 0 with a two-phase primal revised
/// simplex. Dantzig pricing, Bland's rule after a run of degenerate pivots.
/// The basis is held as a sparse LU plus a product-form eta file.
LPSolution solve_standard_form(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& c, const SimplexOptions& options = {});

} // namespace lpfp
