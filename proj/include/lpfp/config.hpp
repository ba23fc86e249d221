#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpfp/fp.hpp"
#include "lpfp/grid.hpp"
#include "lpfp/model.hpp"
#include "lpfp/simplex.hpp"

namespace lpfp {

/// Run configuration. Text form is one `section.key = value` per line;
/// `#` starts a comment. Recognized keys:
///
///   problem.name            os_example | control_example
///   problem.drift_scale     problem.kernel_weight     problem.variance
///   grid.t_horizon  grid.n_t  grid.n_s  grid.x_min  grid.x_max  grid.n_a
///   fp.iterations   fp.method (lp|dp)   fp.early_stop_eps   fp.cfl_override
///   fp.reference_point      fp.w1 (true|false)        fp.w1_max_exact_atoms
///   lp.feasibility_tol      lp.optimality_tol         lp.max_iterations
///   lp.export_path
///   output.directory        output.formats (csv,svg,json)
///   output.record_timings
///
/// Grid entries left out fall back to per-problem defaults.
struct RunConfig {
    std::string problem = "os_example";
    ModelParams params;

    double t_horizon = 1.0;
    std::optional<std::size_t> n_t;
    std::optional<std::size_t> n_s;
    std::optional<std::size_t> n_a;
    std::optional<double> x_min;
    std::optional<double> x_max;

    std::size_t iterations = 100;
    BestResponseMethod method = BestResponseMethod::dp;
    std::optional<double> early_stop;
    bool cfl_override = false;
    std::optional<double> reference_point;
    bool compute_w1 = true;
    std::size_t w1_max_exact_atoms = 400;

    SimplexOptions lp;
    std::string lp_export_path;

    std::string output_directory = "lpfp_out";
    std::vector<std::string> formats = {"csv", "svg", "json"};
    bool record_timings = false;

    bool wants(const std::string& format) const;
};

/// Throws ConfigError carrying the line number of the offending entry.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

ModelSpec resolve_model(const RunConfig& config);
GridSpec resolve_grid(const RunConfig& config, const ModelSpec& model);

/// Every setting after defaults are applied, as (key, value) pairs in a
/// fixed order.
std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& config);

struct ConfigReport {
    bool ok = false;
    bool cfl_ok = false;
    std::string error;
    std::vector<std::pair<std::string, std::string>> settings;
    CflReport cfl;
    std::string cfl_text;
};

/// Parses and resolves without running. Never throws for bad input; the
/// report carries the error instead.
ConfigReport validate_config(const std::filesystem::path& path);

} // namespace lpfp
