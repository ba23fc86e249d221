#include <cmath>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "lpfp/dp.hpp"
#include "lpfp/errors.hpp"
#include "lpfp/fp.hpp"
#include "lpfp/lp.hpp"

using namespace lpfp;

TEST_SUITE("dp") {

TEST_CASE("single interior node, forced continuation") {
    // sigma = b = 0: the chain never moves.
    const ModelSpec model = testing::constant_model(0.0, 0.0, 1.0, 0.0);
    const GridSpec grid = build_grid(1.0, 1, 0.0, 1.0, 2);
    const BestResponse br = best_response(grid, model, MeanField::zeros(Support(grid, model.kind)));
    const Support support(grid, model.kind);
    CHECK(br.value == doctest::Approx(grid.delta_t));
    CHECK(br.measures.m(static_cast<Eigen::Index>(support.m_index(0, 1, 0))) == doctest::Approx(1.0));
    CHECK(br.measures.mu(static_cast<Eigen::Index>(support.mu_index(1, 1))) == doctest::Approx(1.0));
    CHECK(br.measures.mu.sum() == doctest::Approx(1.0));
}

TEST_CASE("constant terminal reward, no running reward") {
    const ModelSpec model = testing::constant_model(0.3, 1.0, 0.0, 2.5);
    const GridSpec grid = build_grid(1.0, 40, 0.0, 1.0, 6);
    const BestResponse br = best_response(grid, model, MeanField::zeros(Support(grid, model.kind)));
    CHECK(br.value == doctest::Approx(2.5));
    // Ties continue.
    for (std::uint32_t p : br.policy) CHECK(p == 1u);
}

TEST_CASE("control ties take the first action") {
    ModelSpec model = testing::constant_model(0.0, 1.0, -1.0, 0.0, ProblemKind::control_absorption);
    const GridSpec grid = build_grid(1.0, 40, 0.0, 1.0, 6, {-1.0, 0.0, 1.0});
    const BestResponse br = best_response(grid, model, MeanField::zeros(Support(grid, model.kind)));
    for (std::uint32_t p : br.policy) CHECK(p == 0u);
}

TEST_CASE("one action reduces to the uncontrolled absorbed chain") {
    const ModelSpec model = builtin_model("control_example");
    const GridSpec grid = build_grid(1.0, 60, -2.0, 2.0, 12, {0.0});
    const Support support(grid, model.kind);
    const MeanField guess = initial_guess(grid, model);
    const BestResponse br = best_response(grid, model, guess);
    // Value of the absorbed chain by direct accumulation along its law.
    const RewardTables tables = precompute_reward_tables(model, grid, support, guess);
    const double direct = tables.terminal.dot(br.measures.mu) + grid.delta_t * tables.running.dot(br.measures.m);
    CHECK(br.value == doctest::Approx(direct).epsilon(1e-12));
    // The single-action guess is the response itself.
    CHECK((guess.mu - br.measures.mu).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((guess.m - br.measures.m).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("symmetric problem has a symmetric value function") {
    ModelSpec model = testing::constant_model(0.0, 1.0, 0.0, 0.0, ProblemKind::control_absorption);
    model.drift = [](double, double, double a) { return a; };
    model.running_reward = [](double, double x, double a, double) { return -a * a - x * x; };
    model.terminal_reward = [](double, double x, const Eigen::VectorXd&) { return -std::abs(x); };
    model.initial_density = [](double x) { return std::exp(-x * x); };
    const GridSpec grid = build_grid(1.0, 80, -1.0, 1.0, 10, {-0.5, 0.5});
    const BestResponse br = best_response(grid, model, MeanField::zeros(Support(grid, model.kind)));
    for (Eigen::Index i = 0; i < br.value_function.rows(); ++i)
        for (Eigen::Index j = 0; j <= 10; ++j)
            CHECK(br.value_function(i, j) == doctest::Approx(br.value_function(i, 10 - j)).epsilon(1e-12));
}

TEST_CASE("best response beats every sampled policy") {
    const ModelSpec model = builtin_model("os_example");
    const GridSpec grid = default_grid(model, 10, 16, 0);
    const Support support(grid, model.kind);
    const TransitionTable table(grid, model);
    const DiscreteInitialLaw initial = discretize_initial(model, grid);
    const MeanField mf = initial_guess(grid, model);
    const RewardTables tables = precompute_reward_tables(model, grid, support, mf);
    const BestResponse br = best_response_stopping(grid, table, tables, initial);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint32_t> policy(br.policy.size());
        for (auto& p : policy) p = static_cast<std::uint32_t>(rng() % 2);
        const MeanField other = propagate_policy(grid, table, initial, policy);
        const double value = tables.terminal.dot(other.mu) + grid.delta_t * tables.running.dot(other.m);
        CHECK(value <= br.value + 1e-12);
    }
}

TEST_CASE("propagated measures conserve mass") {
    const ModelSpec model = builtin_model("control_example");
    const GridSpec grid = default_grid(model, 70, 16, 5);
    const BestResponse br = best_response(grid, model, initial_guess(grid, model));
    CHECK(br.measures.mu.sum() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(br.measures.mu.minCoeff() >= 0.0);
    CHECK(br.measures.m.minCoeff() >= 0.0);
    const Eigen::MatrixXd marginals = state_marginals(Support(grid, model.kind), br.measures.m);
    CHECK(marginals.row(0).sum() == doctest::Approx(1.0));
}

TEST_CASE("unstable grid is refused") {
    const ModelSpec model = builtin_model("control_example");
    const GridSpec grid = default_grid(model, 20, 30, 5);
    CHECK_THROWS_AS(best_response(grid, model, MeanField::zeros(Support(grid, model.kind))), CflError);
}

}
