#include "lpfp/fp.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpfp/dp.hpp"
#include "lpfp/errors.hpp"
#include "lpfp/generator.hpp"
#include "lpfp/lp.hpp"
#include "lpfp/metrics.hpp"

namespace lpfp {

const char* to_string(BestResponseMethod method) { return method == BestResponseMethod::lp ? "lp" : "dp"; }

BestResponseMethod parse_method(const std::string& text) {
    if (text == "lp") return BestResponseMethod::lp;
    if (text == "dp") return BestResponseMethod::dp;
    throw std::invalid_argument("unknown best-response method '" + text + "' (expected lp or dp)");
}

MeanField initial_guess(const GridSpec& grid, const ModelSpec& model) {
    check_compatible(grid, model);
    const TransitionTable transitions(grid, model);
    const std::uint32_t choice =
        model.kind == ProblemKind::stopping ? 1u : static_cast<std::uint32_t>((grid.n_actions() - 1) / 2);
    const std::vector<std::uint32_t> policy(grid.n_t * (grid.n_s - 1), choice);
    return propagate_policy(grid, transitions, discretize_initial(model, grid), policy);
}

double exploitability(const GridSpec& grid, const RewardTables& tables, const MeanField& mean_field,
                      const MeanField& response) {
    if (mean_field.mu.size() != response.mu.size() || mean_field.m.size() != response.m.size() ||
        tables.terminal.size() != mean_field.mu.size() || tables.running.size() != mean_field.m.size())
        throw std::invalid_argument("exploitability: shape mismatch");
    return tables.terminal.dot(response.mu - mean_field.mu) +
           grid.delta_t * tables.running.dot(response.m - mean_field.m);
}

double exploitability(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                      const MeanField& response) {
    const Support support(grid, model.kind);
    return exploitability(grid, precompute_reward_tables(model, grid, support, mean_field), mean_field, response);
}

RunTrace lpfp_run(const GridSpec& grid, const ModelSpec& model, const MeanField& guess, const FpOptions& options) {
    check_compatible(grid, model);
    const Support support(grid, model.kind);
    if (!matches(support, guess)) throw std::invalid_argument("lpfp_run: initial guess does not match the grid");
    if (options.iterations < 1) throw std::invalid_argument("lpfp_run: at least one iteration is required");
    if (!options.cfl_override) {
        const CflReport cfl = validate_cfl(grid, model);
        if (!cfl.passed) throw CflError(cfl.describe(grid));
    }
    const TransitionTable transitions(grid, model);
    const DiscreteInitialLaw initial = discretize_initial(model, grid);
    const double x0 = options.reference_point.value_or(0.5 * (grid.x_min + grid.x_max));

    RunTrace trace;
    trace.records.reserve(options.iterations);
    MeanField average = guess;
    for (std::size_t ell = 0; ell < options.iterations; ++ell) {
        const auto start = std::chrono::steady_clock::now();
        const RewardTables tables = precompute_reward_tables(model, grid, support, average);

        MeanField response;
        if (options.method == BestResponseMethod::dp) {
            response = model.kind == ProblemKind::stopping
                           ? best_response_stopping(grid, transitions, tables, initial).measures
                           : best_response_control(grid, transitions, tables, initial).measures;
        } else {
            const LinearProgram lp = build_lp(grid, model, average, !options.cfl_override);
            LPSolution sol;
            try {
                sol = solve_lp(lp, options.lp);
            } catch (const SolverError& e) {
                trace.failure = "iteration " + std::to_string(ell + 1) + ": " + e.what();
                break;
            }
            if (sol.status != SolveStatus::optimal) {
                trace.failure = "iteration " + std::to_string(ell + 1) + ": LP " + to_string(sol.status) + " (" +
                                sol.diagnostics + ")";
                break;
            }
            response = split_solution(support, sol.values);
        }

        IterationRecord rec;
        rec.n = ell + 1;
        rec.exploitability = exploitability(grid, tables, average, response);

        const double keep = static_cast<double>(ell) / static_cast<double>(ell + 1);
        const double take = 1.0 / static_cast<double>(ell + 1);
        MeanField next = combine(average, keep, response, take);

        rec.dm_step = d_m_metric(support, average.m, next.m, grid, x0);
        rec.wtv_step = weighted_tv(support, average.mu, next.mu, grid, model.growth_p);
        if (options.compute_w1 && std::abs(average.mu.sum() - next.mu.sum()) <= 1e-9) {
            const W1Estimate w1 = w1_exit(support, average.mu, next.mu, grid, options.w1_max_exact_atoms);
            rec.w1_step = w1.value;
            rec.w1_exact = w1.exact;
        } else {
            rec.w1_step = std::numeric_limits<double>::quiet_NaN();
            rec.w1_exact = false;
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        average = std::move(next);
        trace.last_response = std::move(response);
        trace.records.push_back(rec);
        if (options.on_iteration) options.on_iteration(rec);
        if (options.early_stop && rec.exploitability < *options.early_stop) break;
    }
    trace.final_average = std::move(average);
    trace.completed = trace.failure.empty();
    return trace;
}

Eigen::MatrixXd extract_markov_control(const GridSpec& grid, const Support& support, const MeanField& mean_field) {
    if (support.kind() != ProblemKind::control_absorption)
        throw std::invalid_argument("extract_markov_control: stopping problems have no control");
    if (!matches(support, mean_field)) throw std::invalid_argument("extract_markov_control: shape mismatch");
    Eigen::MatrixXd alpha = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(grid.n_t),
                                                      static_cast<Eigen::Index>(grid.n_s + 1),
                                                      std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < grid.n_t; ++i)
        for (std::size_t j = 1; j < grid.n_s; ++j) {
            double mass = 0.0, moment = 0.0;
            for (std::size_t k = 0; k < support.n_a(); ++k) {
                const double w = mean_field.m(static_cast<Eigen::Index>(support.m_index(i, j, k)));
                mass += w;
                moment += grid.action(k) * w;
            }
            if (mass > 0.0) alpha(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = moment / mass;
        }
    return alpha;
}

double loglog_slope(const std::vector<IterationRecord>& records, std::size_t n_from, std::size_t n_to) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (const IterationRecord& r : records) {
        if (r.n < n_from || r.n > n_to || !(r.exploitability > 0.0)) continue;
        const double x = std::log10(static_cast<double>(r.n));
        const double y = std::log10(r.exploitability);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(count);
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace lpfp
