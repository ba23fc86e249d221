#include <cmath>
#include <limits>

#include <doctest.h>

#include "helpers.hpp"
#include "lpfp/grid.hpp"

using namespace lpfp;

TEST_SUITE("grid") {

TEST_CASE("build_grid spacing and nodes") {
    const GridSpec g = build_grid(1.0, 2, 0.0, 1.0, 4);
    CHECK(g.delta_t == doctest::Approx(0.5));
    CHECK(g.delta_x == doctest::Approx(0.25));
    const double nodes[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t j = 0; j <= 4; ++j) CHECK(g.state(j) == doctest::Approx(nodes[j]));
    CHECK(g.time(2) == 1.0);
    CHECK(g.n_actions() == 1);
    CHECK_FALSE(g.has_actions());

    const GridSpec h = build_grid(1.0, 100, -2.0, 2.0, 40, uniform_actions(-1.0, 1.0, 5));
    CHECK(h.delta_t == doctest::Approx(0.01));
    CHECK(h.delta_x == doctest::Approx(0.1));
    CHECK(h.n_actions() == 5);
    CHECK(h.action(0) == -1.0);
    CHECK(h.action(4) == 1.0);
}

TEST_CASE("build_grid rejects degenerate input") {
    CHECK_THROWS_AS(build_grid(1.0, 0, 0.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1.0, 2, 0.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1.0, 2, 1.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0.0, 2, 0.0, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1.0, 2, 0.0, 1.0, 4, {0.5, -0.5}), std::invalid_argument);
}

TEST_CASE("nearest indices") {
    const GridSpec g = build_grid(1.0, 10, -1.0, 1.0, 20);
    CHECK(g.nearest_time_index(0.1) == 1);
    CHECK(g.nearest_time_index(0.94) == 9);
    CHECK(g.nearest_state_index(0.5) == 15);
    CHECK(g.nearest_state_index(-5.0) == 0);
}

TEST_CASE("serialize and parse round trip") {
    const GridSpec g = build_grid(0.7, 13, -2.25, 3.1, 17, uniform_actions(-1.0, 1.0, 3));
    CHECK(parse_grid(serialize_grid(g)) == g);
}

TEST_CASE("cfl bound by hand") {
    const GridSpec g = build_grid(1.0, 100, 0.0, 2.0, 10);  // delta_x = 0.2
    CHECK(std::abs(cfl_max_dt(g, testing::constant_model(1.0, 1.0)) - 1.0 / 30.0) < 1e-12);
    const GridSpec h = build_grid(1.0, 100, 0.0, 1.0, 10);  // delta_x = 0.1
    CHECK(std::abs(cfl_max_dt(h, testing::constant_model(0.0, 1.0)) - 0.01) < 1e-15);
    CHECK(std::isinf(cfl_max_dt(h, testing::constant_model(0.0, 0.0))));
    CHECK(validate_cfl(h, testing::constant_model(0.0, 0.0)).passed);
}

TEST_CASE("cfl gate") {
    const ModelSpec model = testing::constant_model(1.0, 1.0);
    CHECK(validate_cfl(build_grid(1.0, 100, 0.0, 2.0, 10), model).passed);
    const CflReport fail = validate_cfl(build_grid(1.0, 20, 0.0, 2.0, 10), model);
    CHECK_FALSE(fail.passed);
    CHECK(fail.describe(build_grid(1.0, 20, 0.0, 2.0, 10)).find("x=") != std::string::npos);

    // Equality passes: choose delta_t as the bound itself.
    const GridSpec g = build_grid(1.0, 4, 0.0, 1.0, 4);  // delta_x = 0.25, sigma 1, b 0 -> 0.0625
    GridSpec at_bound = g;
    at_bound.delta_t = cfl_max_dt(g, testing::constant_model(0.0, 1.0));
    CHECK(validate_cfl(at_bound, testing::constant_model(0.0, 1.0)).passed);
}

}
