#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lpfp/grid.hpp"
#include "lpfp/mean_field.hpp"
#include "lpfp/model.hpp"
#include "lpfp/simplex.hpp"

namespace lpfp {

enum class BestResponseMethod { lp, dp };

const char* to_string(BestResponseMethod method);
BestResponseMethod parse_method(const std::string& text);

/// One fictitious-play step. `n` is the index of the best response computed
/// in this step (1-based), `exploitability` the gain of that response over
/// the average it answered. The *_step fields compare the averages before and
/// after the step: d_M on flows, W1 on exit measures, weighted TV on exits.
struct IterationRecord {
    std::size_t n = 0;
    double exploitability = 0.0;
    double dm_step = 0.0;
    double w1_step = 0.0;
    bool w1_exact = true;
    double wtv_step = 0.0;
    double seconds = 0.0;

    double exploitability_clamped() const { return exploitability > 0.0 ? exploitability : 0.0; }
};

struct RunTrace {
    std::vector<IterationRecord> records;
    MeanField final_average;
    MeanField last_response;
    // False when a solver failure stopped the run early; records stay valid.
    bool completed = false;
    std::string failure;
};

struct FpOptions {
    std::size_t iterations = 100;
    BestResponseMethod method = BestResponseMethod::dp;
    // Stop once the exploitability falls below this value. Off by default.
    std::optional<double> early_stop;
    bool cfl_override = false;
    SimplexOptions lp;
    // Reference point of W1'; defaults to the middle of the state grid.
    std::optional<double> reference_point;
    bool compute_w1 = true;
    std::size_t w1_max_exact_atoms = 400;
    std::function<void(const IterationRecord&)> on_iteration;
};

/// Stopping: never stop until absorbed or T. Control: middle action everywhere.
MeanField initial_guess(const GridSpec& grid, const ModelSpec& model);

/// Gamma[mean_field](response) - Gamma[mean_field](mean_field) with rewards
/// frozen at mean_field.
double exploitability(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                      const MeanField& response);
double exploitability(const GridSpec& grid, const RewardTables& tables, const MeanField& mean_field,
                      const MeanField& response);

/// Runs exactly options.iterations best-response / averaging steps (fewer if
/// early_stop triggers). Step l averages with weights l/(l+1) and 1/(l+1).
/// Throws CflError before the first step if the grid is unstable and
/// cfl_override is off; solver failures end the trace with completed = false.
RunTrace lpfp_run(const GridSpec& grid, const ModelSpec& model, const MeanField& guess, const FpOptions& options);

/// Mean action per node, (n_t) x (n_s + 1); NaN where the averaged flow has
/// no mass and on boundary columns. Throws std::invalid_argument for stopping
/// supports.
Eigen::MatrixXd extract_markov_control(const GridSpec& grid, const Support& support, const MeanField& mean_field);

/// Least-squares slope of log10(eps_N) against log10(N) over n_from <= N <= n_to,
/// skipping nonpositive values. NaN if fewer than two usable points.
double loglog_slope(const std::vector<IterationRecord>& records, std::size_t n_from, std::size_t n_to);

} // namespace lpfp
