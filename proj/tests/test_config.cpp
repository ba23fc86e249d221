#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "lpfp/config.hpp"
#include "lpfp/errors.hpp"

using namespace lpfp;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

int error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

std::string setting(const ConfigReport& r, const std::string& key) {
    for (const auto& [k, v] : r.settings)
        if (k == key) return v;
    return {};
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("full file") {
    const RunConfig c = parse(
        "# comment\n"
        "problem.name = control_example\n"
        "problem.kernel_weight = 5\n"
        "grid.n_t = 300   # trailing comment\n"
        "grid.n_s = 40\n"
        "grid.n_a = 3\n"
        "fp.iterations = 12\n"
        "fp.method = lp\n"
        "fp.early_stop_eps = 1e-4\n"
        "lp.max_iterations = 5000\n"
        "output.directory = out/here\n"
        "output.formats = csv,json\n");
    CHECK(c.problem == "control_example");
    CHECK(c.params.kernel_weight == 5.0);
    CHECK(*c.n_t == 300);
    CHECK(*c.n_a == 3);
    CHECK(c.iterations == 12);
    CHECK(c.method == BestResponseMethod::lp);
    CHECK(*c.early_stop == 1e-4);
    CHECK(c.lp.max_iterations == 5000);
    CHECK(c.output_directory == "out/here");
    CHECK(c.wants("json"));
    CHECK_FALSE(c.wants("svg"));
    const GridSpec grid = resolve_grid(c, resolve_model(c));
    CHECK(grid.actions.size() == 3);
    CHECK(grid.x_min == -2.0);
}

TEST_CASE("errors carry line numbers") {
    CHECK(error_line("problem.name = os_example\nproblem.name = os_example\n") == 2);
    CHECK(error_line("\n\nproblem.name = nope\n") == 3);
    CHECK(error_line("grid.n_t = -4\n") == 1);
    CHECK(error_line("grid.n_t = 0\n") == 1);
    CHECK(error_line("fp.method = simplex\n") == 1);
    CHECK(error_line("grid.bogus = 1\n") == 1);
    CHECK(error_line("just text\n") == 1);
    CHECK(error_line("problem.name = os_example\ngrid.n_a = 3\n") == 2);
    CHECK(error_line("grid.x_min = 1\ngrid.x_max = 0\n") == 2);
    CHECK(error_line("fp.cfl_override = maybe\n") == 1);
}

TEST_CASE("validate: minimal file echoes defaults") {
    const auto path = write_temp("lpfp_min.cfg", "problem.name = os_example\n");
    const ConfigReport r = validate_config(path);
    CHECK(r.ok);
    CHECK(r.error.empty());
    CHECK(setting(r, "grid.n_t") == "50");
    CHECK(setting(r, "grid.n_s") == "80");
    CHECK(setting(r, "fp.method") == "dp");
    CHECK(setting(r, "grid.x_min") == "-11");
    std::filesystem::remove(path);
}

TEST_CASE("validate: unstable grid names the binding node") {
    const auto path = write_temp("lpfp_cfl.cfg", "problem.name = control_example\ngrid.n_t = 20\ngrid.n_s = 30\n");
    const ConfigReport r = validate_config(path);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.cfl_ok);
    CHECK(r.cfl_text.find("violated") != std::string::npos);
    CHECK(r.cfl_text.find("x=") != std::string::npos);
    CHECK(r.cfl.max_dt == doctest::Approx((4.0 / 30) * (4.0 / 30) / (1.0 + 4.0 / 30)));
    std::filesystem::remove(path);

    const auto forced = write_temp("lpfp_cfl2.cfg",
                                   "problem.name = control_example\ngrid.n_t = 20\nfp.cfl_override = true\n");
    CHECK(validate_config(forced).ok);
    std::filesystem::remove(forced);
}

TEST_CASE("validate: unknown problem and missing file") {
    const auto path = write_temp("lpfp_bad.cfg", "problem.name = heat\n");
    const ConfigReport r = validate_config(path);
    CHECK_FALSE(r.ok);
    CHECK(r.error.find("line 1") != std::string::npos);
    std::filesystem::remove(path);
    CHECK_FALSE(validate_config("/nonexistent/lpfp.cfg").ok);
}

}
