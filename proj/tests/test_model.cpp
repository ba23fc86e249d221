#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "lpfp/fp.hpp"
#include "lpfp/model.hpp"

using namespace lpfp;

TEST_SUITE("model") {

TEST_CASE("registry") {
    CHECK(builtin_model("os_example").kind == ProblemKind::stopping);
    CHECK(builtin_model("control_example").kind == ProblemKind::control_absorption);
    CHECK_THROWS_AS(builtin_model("nope"), std::invalid_argument);
    CHECK(builtin_model_names().size() == 2);
}

TEST_CASE("os_example rewards by hand") {
    const ModelSpec model = builtin_model("os_example");
    const GridSpec grid = default_grid(model, 10, 20, 0);
    const std::size_t mid = grid.nearest_state_index(0.0);
    REQUIRE(std::abs(grid.state(mid)) < 1e-12);

    // f at x = 0 against a unit mass at y = 0.
    Eigen::VectorXd slice = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.n_s + 1));
    slice(static_cast<Eigen::Index>(mid)) = 1.0;
    CHECK(running_reward_at(model, grid, 0, mid, slice, 0.0) == doctest::Approx(0.0));
    // f at x_j against a unit mass at 0 is x_j.
    CHECK(running_reward_at(model, grid, 0, mid + 3, slice, 0.0) == doctest::Approx(grid.state(mid + 3)));

    // g at t = 1 with mu concentrated at s = 0.
    ExitAtoms atoms;
    atoms.t = {0.0};
    atoms.x = {0.0};
    atoms.mass = {1.0};
    CHECK(model.terminal_reward(1.0, 0.3, model.exit_statistics(atoms)) == doctest::Approx(1.0));
}

TEST_CASE("control_example rewards by hand") {
    const ModelSpec model = builtin_model("control_example");
    const GridSpec grid = default_grid(model, 200, 40, 5);
    const std::size_t at_one = grid.nearest_state_index(1.0);
    const Eigen::VectorXd empty = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.n_s + 1));
    CHECK(running_reward_at(model, grid, 0, at_one, empty, 0.0) == doctest::Approx(0.0));

    Eigen::VectorXd unit = empty;
    unit(static_cast<Eigen::Index>(at_one)) = 1.0;
    CHECK(running_reward_at(model, grid, 0, at_one, unit, 0.0) == doctest::Approx(-10.0));
    CHECK(model.terminal_reward(0.4, -1.5, Eigen::VectorXd()) == doctest::Approx(-1.5));
}

TEST_CASE("control reward strictly concave in the action") {
    const ModelSpec model = builtin_model("control_example");
    const GridSpec grid = default_grid(model, 200, 40, 9);
    std::mt19937_64 rng(11);
    const Eigen::VectorXd slice = testing::random_masses(rng, static_cast<Eigen::Index>(grid.n_s + 1), 0.8);
    for (std::size_t j = 1; j < grid.n_s; ++j) {
        for (std::size_t k = 1; k + 1 < grid.n_actions(); ++k) {
            const double second = running_reward_at(model, grid, 3, j, slice, grid.action(k + 1)) -
                                  2.0 * running_reward_at(model, grid, 3, j, slice, grid.action(k)) +
                                  running_reward_at(model, grid, 3, j, slice, grid.action(k - 1));
            CHECK(second < 0.0);
        }
    }
}

TEST_CASE("discretize_initial") {
    SUBCASE("uniform density on [0, 1]") {
        const ModelSpec model = testing::constant_model(0.0, 1.0);
        const DiscreteInitialLaw law = discretize_initial(model, build_grid(1.0, 2, 0.0, 1.0, 4));
        REQUIRE(law.masses.size() == 3);
        for (Eigen::Index j = 0; j < 3; ++j) CHECK(law.masses(j) == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("gaussian on the default stopping grid") {
        const ModelSpec model = builtin_model("os_example");
        const DiscreteInitialLaw law = discretize_initial(model, default_grid(model, 50, 80, 0));
        CHECK(std::abs(law.masses.sum() - 1.0) < 1e-12);
        CHECK(law.masses.minCoeff() >= 0.0);
    }
    SUBCASE("zero density") {
        ModelSpec model = testing::constant_model(0.0, 1.0);
        model.initial_density = [](double) { return 0.0; };
        CHECK_THROWS_AS(discretize_initial(model, build_grid(1.0, 2, 0.0, 1.0, 4)), std::invalid_argument);
    }
}

TEST_CASE("default grid keeps the stopping boundary far from the initial law") {
    const ModelSpec model = builtin_model("os_example");
    const GridSpec grid = default_grid(model, 50, 80, 0);
    CHECK(grid.x_min == doctest::Approx(-11.0));
    CHECK(grid.x_max == doctest::Approx(11.0));
}

TEST_CASE("reward tables") {
    SUBCASE("empty flow gives zero running reward") {
        const ModelSpec model = builtin_model("os_example");
        const GridSpec grid = default_grid(model, 10, 20, 0);
        const Support support(grid, model.kind);
        const RewardTables tables = precompute_reward_tables(model, grid, support, MeanField::zeros(support));
        CHECK(tables.running.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("unit exit mass at s = 0 gives G = t") {
        const ModelSpec model = builtin_model("os_example");
        const GridSpec grid = default_grid(model, 10, 20, 0);
        const Support support(grid, model.kind);
        MeanField mf = MeanField::zeros(support);
        mf.mu(static_cast<Eigen::Index>(support.mu_index(0, 7))) = 1.0;
        const RewardTables tables = precompute_reward_tables(model, grid, support, mf);
        for (std::size_t i = 0; i <= grid.n_t; ++i)
            for (std::size_t j = 0; j <= grid.n_s; ++j)
                CHECK(tables.terminal(static_cast<Eigen::Index>(support.mu_index(i, j))) ==
                      doctest::Approx(grid.time(i)));
    }
    SUBCASE("pure function of the mean field") {
        const ModelSpec model = builtin_model("control_example");
        const GridSpec grid = default_grid(model, 80, 20, 3);
        const Support support(grid, model.kind);
        const MeanField mf = initial_guess(grid, model);
        const RewardTables a = precompute_reward_tables(model, grid, support, mf);
        const RewardTables b = precompute_reward_tables(model, grid, support, mf);
        CHECK(a.running == b.running);
        CHECK(a.terminal == b.terminal);
    }
    SUBCASE("shape mismatch") {
        const ModelSpec model = builtin_model("os_example");
        const GridSpec grid = default_grid(model, 10, 20, 0);
        const Support support(grid, model.kind);
        CHECK_THROWS_AS(precompute_reward_tables(model, grid, support, MeanField{}), std::invalid_argument);
    }
}

}
