#include "lpfp/dp.hpp"

#include <stdexcept>

#include "lpfp/errors.hpp"

namespace lpfp {

namespace {

using Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

std::size_t policy_index(const GridSpec& grid, std::size_t i, std::size_t j) { return i * (grid.n_s - 1) + (j - 1); }

double continuation(const Eigen::MatrixXd& V, std::size_t i, std::size_t j, const TransitionTriple& p) {
    return p.down * V(idx(i + 1), idx(j - 1)) + p.stay * V(idx(i + 1), idx(j)) + p.up * V(idx(i + 1), idx(j + 1));
}

void check_shapes(const GridSpec& grid, const TransitionTable& transitions, const RewardTables& tables,
                  const DiscreteInitialLaw& initial) {
    const Support& s = transitions.support();
    if (s.n_t() != grid.n_t || s.n_s() != grid.n_s || s.n_a() != grid.n_actions())
        throw std::invalid_argument("best response: transition table built for another grid");
    if (static_cast<std::size_t>(tables.terminal.size()) != s.mu_size() ||
        static_cast<std::size_t>(tables.running.size()) != s.m_size())
        throw std::invalid_argument("best response: reward tables do not match the support");
    if (static_cast<std::size_t>(initial.masses.size()) != grid.n_s - 1)
        throw std::invalid_argument("best response: initial law does not match the grid");
}

double initial_value(const GridSpec& grid, const Eigen::MatrixXd& V, const DiscreteInitialLaw& initial) {
    double v = 0.0;
    for (std::size_t j = 1; j < grid.n_s; ++j) v += V(0, idx(j)) * initial.at(j);
    return v;
}

} // namespace

MeanField propagate_policy(const GridSpec& grid, const TransitionTable& transitions,
                           const DiscreteInitialLaw& initial, const std::vector<std::uint32_t>& policy) {
    const Support& support = transitions.support();
    const bool stopping = support.kind() == ProblemKind::stopping;
    if (policy.size() != grid.n_t * (grid.n_s - 1)) throw std::invalid_argument("propagate_policy: policy size");
    MeanField out = MeanField::zeros(support);
    Eigen::VectorXd incoming = Eigen::VectorXd::Zero(idx(grid.n_s + 1));
    for (std::size_t j = 1; j < grid.n_s; ++j) incoming(idx(j)) = initial.at(j);

    for (std::size_t i = 0; i < grid.n_t; ++i) {
        Eigen::VectorXd next = Eigen::VectorXd::Zero(idx(grid.n_s + 1));
        for (std::size_t j = 0; j <= grid.n_s; ++j) {
            const double mass = incoming(idx(j));
            if (!grid.is_interior(j)) {
                out.mu(idx(support.mu_index(i, j))) += mass;
                continue;
            }
            const std::uint32_t decision = policy[policy_index(grid, i, j)];
            if (stopping && decision == 0) {
                out.mu(idx(support.mu_index(i, j))) += mass;
                continue;
            }
            const std::size_t k = stopping ? 0 : decision;
            if (k >= grid.n_actions()) throw std::invalid_argument("propagate_policy: action index out of range");
            out.m(idx(support.m_index(i, j, k))) += mass;
            const TransitionTriple& p = transitions(i, j, k);
            next(idx(j - 1)) += p.down * mass;
            next(idx(j)) += p.stay * mass;
            next(idx(j + 1)) += p.up * mass;
        }
        incoming = next;
    }
    for (std::size_t j = 0; j <= grid.n_s; ++j) out.mu(idx(support.mu_index(grid.n_t, j))) += incoming(idx(j));
    return out;
}

BestResponse best_response_stopping(const GridSpec& grid, const TransitionTable& transitions,
                                    const RewardTables& tables, const DiscreteInitialLaw& initial) {
    check_shapes(grid, transitions, tables, initial);
    const Support& support = transitions.support();
    if (support.kind() != ProblemKind::stopping) throw std::invalid_argument("best_response_stopping: control support");

    BestResponse br;
    br.value_function.resize(idx(grid.n_t + 1), idx(grid.n_s + 1));
    br.policy.assign(grid.n_t * (grid.n_s - 1), 0);
    auto& V = br.value_function;
    const auto G = [&](std::size_t i, std::size_t j) { return tables.terminal(idx(support.mu_index(i, j))); };

    for (std::size_t j = 0; j <= grid.n_s; ++j) V(idx(grid.n_t), idx(j)) = G(grid.n_t, j);
    for (std::size_t i = grid.n_t; i-- > 0;) {
        V(idx(i), 0) = G(i, 0);
        V(idx(i), idx(grid.n_s)) = G(i, grid.n_s);
        for (std::size_t j = 1; j < grid.n_s; ++j) {
            const double stop = G(i, j);
            const double cont = grid.delta_t * tables.running(idx(support.m_index(i, j, 0))) +
                                continuation(V, i, j, transitions(i, j, 0));
            const bool go_on = cont >= stop;
            br.policy[policy_index(grid, i, j)] = go_on ? 1u : 0u;
            V(idx(i), idx(j)) = go_on ? cont : stop;
        }
    }
    br.value = initial_value(grid, V, initial);
    br.measures = propagate_policy(grid, transitions, initial, br.policy);
    return br;
}

BestResponse best_response_control(const GridSpec& grid, const TransitionTable& transitions,
                                   const RewardTables& tables, const DiscreteInitialLaw& initial) {
    check_shapes(grid, transitions, tables, initial);
    const Support& support = transitions.support();
    if (support.kind() != ProblemKind::control_absorption)
        throw std::invalid_argument("best_response_control: stopping support");

    BestResponse br;
    br.value_function.resize(idx(grid.n_t + 1), idx(grid.n_s + 1));
    br.policy.assign(grid.n_t * (grid.n_s - 1), 0);
    auto& V = br.value_function;
    const auto G = [&](std::size_t i, std::size_t j) { return tables.terminal(idx(support.mu_index(i, j))); };

    for (std::size_t j = 0; j <= grid.n_s; ++j) V(idx(grid.n_t), idx(j)) = G(grid.n_t, j);
    for (std::size_t i = grid.n_t; i-- > 0;) {
        V(idx(i), 0) = G(i, 0);
        V(idx(i), idx(grid.n_s)) = G(i, grid.n_s);
        for (std::size_t j = 1; j < grid.n_s; ++j) {
            std::uint32_t best_k = 0;
            double best = 0.0;
            for (std::size_t k = 0; k < grid.n_actions(); ++k) {
                const double q = grid.delta_t * tables.running(idx(support.m_index(i, j, k))) +
                                 continuation(V, i, j, transitions(i, j, k));
                if (k == 0 || q > best) {
                    best = q;
                    best_k = static_cast<std::uint32_t>(k);
                }
            }
            br.policy[policy_index(grid, i, j)] = best_k;
            V(idx(i), idx(j)) = best;
        }
    }
    br.value = initial_value(grid, V, initial);
    br.measures = propagate_policy(grid, transitions, initial, br.policy);
    return br;
}

namespace {

struct Prepared {
    TransitionTable transitions;
    RewardTables tables;
    DiscreteInitialLaw initial;
};

Prepared prepare(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field, bool check_cfl) {
    check_compatible(grid, model);
    if (check_cfl) {
        const CflReport cfl = validate_cfl(grid, model);
        if (!cfl.passed) throw CflError(cfl.describe(grid));
    }
    TransitionTable transitions(grid, model);
    RewardTables tables = precompute_reward_tables(model, grid, transitions.support(), mean_field);
    return {std::move(transitions), std::move(tables), discretize_initial(model, grid)};
}

} // namespace

BestResponse best_response_stopping(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                                    bool check_cfl) {
    const Prepared p = prepare(grid, model, mean_field, check_cfl);
    return best_response_stopping(grid, p.transitions, p.tables, p.initial);
}

BestResponse best_response_control(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                                   bool check_cfl) {
    const Prepared p = prepare(grid, model, mean_field, check_cfl);
    return best_response_control(grid, p.transitions, p.tables, p.initial);
}

BestResponse best_response(const GridSpec& grid, const ModelSpec& model, const MeanField& mean_field,
                           bool check_cfl) {
    return model.kind == ProblemKind::stopping ? best_response_stopping(grid, model, mean_field, check_cfl)
                                               : best_response_control(grid, model, mean_field, check_cfl);
}

} // namespace lpfp
