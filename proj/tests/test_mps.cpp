#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <doctest.h>

#include "helpers.hpp"
#include "lpfp/errors.hpp"
#include "lpfp/fp.hpp"
#include "lpfp/lp.hpp"
#include "lpfp/mps.hpp"

using namespace lpfp;

TEST_SUITE("mps") {

TEST_CASE("round trip of the small stopping program") {
    const ModelSpec model = builtin_model("os_example");
    const GridSpec grid = build_grid(1.0, 2, -1.0, 1.0, 4);
    const LinearProgram lp = build_lp(grid, model, initial_guess(grid, model), false);
    REQUIRE(lp.num_rows() == 15);
    std::stringstream text;
    write_mps(lp, text);
    const LinearProgram back = read_mps(text);
    CHECK(back == lp);
    CHECK(back.name == "LPFP_OS");
}

TEST_CASE("round trip of a control program through a file") {
    const ModelSpec model = builtin_model("control_example");
    const GridSpec grid = default_grid(model, 40, 8, 3);
    const LinearProgram lp = build_lp(grid, model, initial_guess(grid, model));
    const auto path = std::filesystem::temp_directory_path() / "lpfp_roundtrip.mps";
    export_mps(lp, path);
    const LinearProgram back = import_mps(path);
    std::filesystem::remove(path);
    CHECK(back == lp);
    // The solved optimum survives the trip.
    CHECK(solve_lp(back).objective_value == doctest::Approx(solve_lp(lp).objective_value).epsilon(1e-12));
}

TEST_CASE("section layout") {
    const ModelSpec model = testing::constant_model(0.0, 1.0, 0.0, 1.0);
    const GridSpec grid = build_grid(1.0, 2, 0.0, 1.0, 4);
    const LinearProgram lp = build_lp(grid, model, MeanField::zeros(Support(grid, model.kind)), false);
    std::stringstream text;
    write_mps(lp, text);
    const std::string s = text.str();
    std::size_t last = 0;
    for (const char* section : {"NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA"}) {
        const std::size_t at = s.find(section);
        REQUIRE(at != std::string::npos);
        CHECK(at >= last);
        last = at;
    }
    CHECK(s.find(" N  OBJ") != std::string::npos);
    CHECK(s.find("MU_0_0") != std::string::npos);
    CHECK(s.find("R_2_4") != std::string::npos);
}

TEST_CASE("empty program and malformed input") {
    CHECK_THROWS(write_mps(LinearProgram{}, std::cout));
    std::stringstream bad("NAME X\nROWS\n N  OBJ\nCOLUMNS\n    C1  NOPE  1\nENDATA\n");
    CHECK_THROWS_WITH_AS(read_mps(bad), doctest::Contains("line 5"), std::runtime_error);
}

}
