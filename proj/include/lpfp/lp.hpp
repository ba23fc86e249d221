#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "lpfp/grid.hpp"
#include "lpfp/mean_field.hpp"
#include "lpfp/model.hpp"
#include "lpfp/simplex.hpp"

namespace lpfp {

struct ColumnLabel {
    enum class Kind { mu, m, other };
    Kind kind = Kind::other;
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    std::string name;  // used for Kind::other
};

struct RowLabel {
    std::size_t i = 0;
    std::size_t j = 0;
    std::string name;  // non-empty only for rows that are not grid nodes
};

/// Equality-constrained maximization over x >= 0.
///
/// Columns for a mean-field game are the exit-measure entries followed by
/// the occupation-flow entries, in the Support order, so a solution vector
/// splits directly into a MeanField.
struct LinearProgram {
    Eigen::SparseMatrix<double> constraints;
    Eigen::VectorXd rhs;
    Eigen::VectorXd objective;
    std::vector<ColumnLabel> columns;
    std::vector<RowLabel> rows;
    std::string name = "LPFP";

    Eigen::Index num_rows() const { return constraints.rows(); }
    Eigen::Index num_cols() const { return constraints.cols(); }

    std::string column_name(std::size_t c) const;
    std::string row_name(std::size_t r) const;

    bool operator==(const LinearProgram& other) const;
};

/// Occupation-measure program of the discretized stopping game. One row per
/// node (t_i, x_j), rows flattened as i * (n_s + 1) + j. Throws CflError when
/// the grid violates the stability bound.
LinearProgram build_lp_stopping(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                                bool check_cfl = true);

/// Same for control with absorption: mu columns on the parabolic boundary,
/// m columns per (t_i, x_j, a_k).
LinearProgram build_lp_control(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                               bool check_cfl = true);

/// Dispatches on model.kind.
LinearProgram build_lp(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                       bool check_cfl = true);

LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Splits a solution vector into (mu, m).
MeanField split_solution(const Support& support, const Eigen::VectorXd& values);

} // namespace lpfp
