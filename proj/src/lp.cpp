#include "lpfp/lp.hpp"

#include <stdexcept>

#include "lpfp/errors.hpp"
#include "lpfp/generator.hpp"

namespace lpfp {

std::string LinearProgram::column_name(std::size_t c) const {
    const ColumnLabel& l = columns.at(c);
    switch (l.kind) {
    case ColumnLabel::Kind::mu: return "MU_" + std::to_string(l.i) + "_" + std::to_string(l.j);
    case ColumnLabel::Kind::m:
        return "M_" + std::to_string(l.i) + "_" + std::to_string(l.j) + "_" + std::to_string(l.k);
    case ColumnLabel::Kind::other: break;
    }
    return l.name.empty() ? "C" + std::to_string(c) : l.name;
}

std::string LinearProgram::row_name(std::size_t r) const {
    const RowLabel& l = rows.at(r);
    if (!l.name.empty()) return l.name;
    return "R_" + std::to_string(l.i) + "_" + std::to_string(l.j);
}

bool LinearProgram::operator==(const LinearProgram& other) const {
    if (num_rows() != other.num_rows() || num_cols() != other.num_cols()) return false;
    if (rhs != other.rhs || objective != other.objective) return false;
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (column_name(c) != other.column_name(c)) return false;
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (row_name(r) != other.row_name(r)) return false;
    const Eigen::SparseMatrix<double> diff = constraints - other.constraints;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
            if (it.value() != 0.0) return false;
    return true;
}

namespace {

// Rows are the indicator test functions of every node. For u = 1_{(t_i, x_j)}
// the constraint collects mu(t_i, x_j), the outflow m(t_i, x_j, .) when the
// node is interior and i < n_t, and minus the inflow from slice i - 1 weighted
// by the chain's transition probabilities.
LinearProgram assemble(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field, bool check_cfl) {
    check_compatible(grid, model);
    const Support support(grid, model.kind);
    if (!matches(support, mean_field)) throw std::invalid_argument("build_lp: mean-field shape mismatch");
    if (check_cfl) {
        const CflReport cfl = validate_cfl(grid, model);
        if (!cfl.passed) throw CflError(cfl.describe(grid));
    }
    const RewardTables tables = precompute_reward_tables(model, grid, support, mean_field);
    const DiscreteInitialLaw initial = discretize_initial(model, grid);
    const TransitionTable transitions(grid, model);

    const std::size_t n_s = grid.n_s;
    const auto row_of = [n_s](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * (n_s + 1) + j); };
    const std::size_t n_rows = (grid.n_t + 1) * (n_s + 1);
    const std::size_t n_mu = support.mu_size();
    const std::size_t n_cols = n_mu + support.m_size();

    LinearProgram lp;
    lp.rows.resize(n_rows);
    for (std::size_t i = 0; i <= grid.n_t; ++i)
        for (std::size_t j = 0; j <= n_s; ++j) lp.rows[static_cast<std::size_t>(row_of(i, j))] = RowLabel{i, j, {}};
    lp.columns.resize(n_cols);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(n_mu + 4 * support.m_size());
    for (std::size_t idx = 0; idx < n_mu; ++idx) {
        const auto [i, j] = support.mu_node(idx);
        lp.columns[idx] = ColumnLabel{ColumnLabel::Kind::mu, i, j, 0, {}};
        triplets.emplace_back(row_of(i, j), static_cast<Eigen::Index>(idx), 1.0);
    }
    for (std::size_t i = 0; i < grid.n_t; ++i)
        for (std::size_t j = 1; j < n_s; ++j)
            for (std::size_t k = 0; k < support.n_a(); ++k) {
                const std::size_t col = n_mu + support.m_index(i, j, k);
                const auto c = static_cast<Eigen::Index>(col);
                lp.columns[col] = ColumnLabel{ColumnLabel::Kind::m, i, j, k, {}};
                const TransitionTriple& p = transitions(i, j, k);
                triplets.emplace_back(row_of(i, j), c, 1.0);
                if (p.down != 0.0) triplets.emplace_back(row_of(i + 1, j - 1), c, -p.down);
                if (p.stay != 0.0) triplets.emplace_back(row_of(i + 1, j), c, -p.stay);
                if (p.up != 0.0) triplets.emplace_back(row_of(i + 1, j + 1), c, -p.up);
            }
    lp.constraints.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
    lp.constraints.setFromTriplets(triplets.begin(), triplets.end());
    lp.constraints.makeCompressed();

    lp.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_rows));
    for (std::size_t j = 1; j < n_s; ++j) lp.rhs(row_of(0, j)) = initial.at(j);

    lp.objective.resize(static_cast<Eigen::Index>(n_cols));
    lp.objective.head(static_cast<Eigen::Index>(n_mu)) = tables.terminal;
    lp.objective.tail(static_cast<Eigen::Index>(support.m_size())) = grid.delta_t * tables.running;
    lp.name = model.kind == ProblemKind::stopping ? "LPFP_OS" : "LPFP_SC";
    return lp;
}

} // namespace

LinearProgram build_lp_stopping(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                                bool check_cfl) {
    if (model.kind != ProblemKind::stopping) throw std::invalid_argument("build_lp_stopping: not a stopping model");
    return assemble(grid, model, mean_field, check_cfl);
}

LinearProgram build_lp_control(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                               bool check_cfl) {
    if (model.kind != ProblemKind::control_absorption)
        throw std::invalid_argument("build_lp_control: not a control model");
    return assemble(grid, model, mean_field, check_cfl);
}

LinearProgram build_lp(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field, bool check_cfl) {
    return assemble(grid, model, mean_field, check_cfl);
}

LPSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
    return solve_standard_form(lp.constraints, lp.rhs, lp.objective, options);
}

MeanField split_solution(const Support& support, const Eigen::VectorXd& values) {
    if (static_cast<std::size_t>(values.size()) != support.mu_size() + support.m_size())
        throw std::invalid_argument("split_solution: size mismatch");
    const auto n_mu = static_cast<Eigen::Index>(support.mu_size());
    return {values.head(n_mu), values.tail(values.size() - n_mu)};
}

} // namespace lpfp
