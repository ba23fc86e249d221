#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lpfp/generator.hpp"
#include "lpfp/grid.hpp"
#include "lpfp/mean_field.hpp"
#include "lpfp/model.hpp"

namespace lpfp {

/// Exact best response on the discretized chain.
///
/// `policy` holds one entry per (i < n_t, interior j), flattened as
/// i * (n_s - 1) + (j - 1): 1 = continue / 0 = stop for stopping problems,
/// the chosen action index for control problems. `value_function` is
/// (n_t + 1) x (n_s + 1).
struct BestResponse {
    double value = 0.0;
    std::vector<std::uint32_t> policy;
    Eigen::MatrixXd value_function;
    MeanField measures;
};

/// Backward induction against frozen reward tables, then a forward push of the
/// initial law. Stopping ties continue; control ties take the smallest action.
BestResponse best_response_stopping(const GridSpec& grid, const TransitionTable& transitions,
                                    const RewardTables& tables, const DiscreteInitialLaw& initial);
BestResponse best_response_control(const GridSpec& grid, const TransitionTable& transitions,
                                   const RewardTables& tables, const DiscreteInitialLaw& initial);

/// Convenience overloads that build tables from a mean field. Throw CflError
/// on an unstable grid unless check_cfl is false.
BestResponse best_response_stopping(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                                    bool check_cfl = true);
BestResponse best_response_control(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                                   bool check_cfl = true);
BestResponse best_response(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                           bool check_cfl = true);

/// Measures induced by a fixed Markov policy (same encoding as BestResponse).
MeanField propagate_policy(const GridSpec& grid, const TransitionTable& transitions,
                           const DiscreteInitialLaw& initial, const std::vector<std::uint32_t>& policy);

} // namespace lpfp
