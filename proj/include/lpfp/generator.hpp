#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "lpfp/grid.hpp"
#include "lpfp/mean_field.hpp"
#include "lpfp/model.hpp"

namespace lpfp {

/// One-step probabilities of the upwind chain from an interior node.
struct TransitionTriple {
    double down = 0.0;
    double stay = 1.0;
    double up = 0.0;
};

/// p_up   = (sigma^2 / 2) dt / dx^2 + b+ dt / dx
/// p_down = (sigma^2 / 2) dt / dx^2 + b- dt / dx
/// p_stay = 1 - sigma^2 dt / dx^2 - |b| dt / dx
/// with b+ = max(b, 0) and b- = -min(b, 0). Throws std::out_of_range on
/// boundary or out-of-range indices.
TransitionTriple transition(const GridSpec& grid, const ModelSpec& model, std::size_t i, std::size_t j,
                            std::size_t k = 0);

/// Every transition triple, laid out like the occupation-flow vector.
class TransitionTable {
public:
    TransitionTable(const GridSpec& grid, const ModelSpec& model);

    const TransitionTriple& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return triples_[support_.m_index(i, j, k)];
    }
    const Support& support() const { return support_; }

private:
    Support support_;
    std::vector<TransitionTriple> triples_;
};

/// Discrete generator applied to u at (t_i, x_j, a_k). `u` is indexed
/// (time, state) on the full (n_t + 1) x (n_s + 1) grid. Returns the sum of
/// the time difference, the two upwind first differences and the centered
/// second difference, all spatial terms taken at t_{i+1}.
double apply_discrete_generator(const GridSpec& grid, const ModelSpec& model, const Eigen::MatrixXd& u,
                                std::size_t i, std::size_t j, std::size_t k = 0);

} // namespace lpfp
