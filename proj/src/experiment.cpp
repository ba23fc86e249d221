#include "lpfp/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lpfp/errors.hpp"
#include "lpfp/lp.hpp"
#include "lpfp/mps.hpp"
#include "lpfp/svg.hpp"

namespace lpfp {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string m_bar_csv(const GridSpec& grid, const Support& support, const MeanField& field) {
    const Eigen::MatrixXd marg = state_marginals(support, field.m);
    std::string out = "t,x,mass\n";
    for (std::size_t i = 0; i < grid.n_t; ++i)
        for (std::size_t j = 1; j < grid.n_s; ++j)
            out += num(grid.time(i)) + "," + num(grid.state(j)) + "," +
                   num(marg(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) + "\n";
    return out;
}

std::string mu_bar_csv(const GridSpec& grid, const Support& support, const MeanField& field) {
    std::string out = "t,x,mass\n";
    for (std::size_t idx = 0; idx < support.mu_size(); ++idx) {
        const auto [i, j] = support.mu_node(idx);
        out += num(grid.time(i)) + "," + num(grid.state(j)) + "," + num(field.mu(static_cast<Eigen::Index>(idx))) + "\n";
    }
    return out;
}

std::string control_csv(const GridSpec& grid, const Support& support, const MeanField& field) {
    const Eigen::MatrixXd alpha = extract_markov_control(grid, support, field);
    const Eigen::MatrixXd marg = state_marginals(support, field.m);
    std::string out = "t,x,alpha,in_game_mass\n";
    for (std::size_t i = 0; i < grid.n_t; ++i)
        for (std::size_t j = 1; j < grid.n_s; ++j) {
            const auto r = static_cast<Eigen::Index>(i);
            const auto c = static_cast<Eigen::Index>(j);
            out += num(grid.time(i)) + "," + num(grid.state(j)) + "," + num(alpha(r, c)) + "," + num(marg(r, c)) + "\n";
        }
    return out;
}

// Staging directory removed on scope exit unless released.
class Staging {
public:
    explicit Staging(const fs::path& parent) {
        std::random_device rd;
        char name[32];
        std::snprintf(name, sizeof name, ".lpfp-staging-%08x", static_cast<unsigned>(rd()));
        path_ = parent / name;
        std::error_code ec;
        if (!fs::create_directory(path_, ec) || ec)
            throw std::runtime_error("cannot write to output directory '" + parent.string() + "'");
    }
    ~Staging() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    Staging(const Staging&) = delete;
    Staging& operator=(const Staging&) = delete;
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

} // namespace

std::string exploitability_csv(const RunTrace& trace, bool record_timings) {
    std::string out = "N,eps_raw,eps_clamped,dm_step,w1_step,wtv_step,seconds\n";
    for (const IterationRecord& r : trace.records) {
        out += std::to_string(r.n) + "," + num(r.exploitability) + "," + num(r.exploitability_clamped()) + "," +
               num(r.dm_step) + "," + num(r.w1_step) + "," + num(r.wtv_step) + "," +
               (record_timings ? num(r.seconds) : std::string()) + "\n";
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> render_figures(const fs::path& csv_dir, ProblemKind kind) {
    std::vector<std::pair<std::string, std::string>> figures;
    const bool control = kind == ProblemKind::control_absorption;

    const svg::NodeTable m = svg::read_node_csv(csv_dir / "m_bar.csv");
    figures.emplace_back("m_bar.svg", svg::render(svg::heatmap_from_table(
                                          m, control ? "players in the game (state marginal)" : "players in the game")));

    const svg::NodeTable mu = svg::read_node_csv(csv_dir / "mu_bar.csv");
    if (!control) {
        figures.emplace_back("mu_bar.svg", svg::render(svg::heatmap_from_table(mu, "exit distribution")));
    } else {
        double t_end = 0.0, x_lo = 0.0, x_hi = 0.0;
        for (std::size_t n = 0; n < mu.t.size(); ++n) {
            t_end = std::max(t_end, mu.t[n]);
            x_lo = n == 0 ? mu.x[n] : std::min(x_lo, mu.x[n]);
            x_hi = n == 0 ? mu.x[n] : std::max(x_hi, mu.x[n]);
        }
        svg::LineChart boundary{"exit mass at the boundary", "time", "mass", {}, false};
        svg::Series lower{"x = " + num(x_lo).substr(0, 6), {}, {}}, upper{"x = " + num(x_hi).substr(0, 6), {}, {}};
        svg::LineChart terminal{"distribution at the terminal time", "state", "mass", {}, false};
        svg::Series last{"t = T", {}, {}};
        for (std::size_t n = 0; n < mu.t.size(); ++n) {
            if (mu.t[n] == t_end) {
                last.x.push_back(mu.x[n]);
                last.y.push_back(mu.value[n]);
            } else if (mu.x[n] == x_lo) {
                lower.x.push_back(mu.t[n]);
                lower.y.push_back(mu.value[n]);
            } else {
                upper.x.push_back(mu.t[n]);
                upper.y.push_back(mu.value[n]);
            }
        }
        boundary.series = {lower, upper};
        terminal.series = {last};
        figures.emplace_back("exit_boundary.svg", svg::render(boundary));
        figures.emplace_back("terminal.svg", svg::render(terminal));
        const svg::NodeTable alpha = svg::read_node_csv(csv_dir / "control.csv", 2);
        figures.emplace_back("control.svg", svg::render(svg::heatmap_from_table(alpha, "Markovian control", true)));
    }

    svg::NodeTable eps = svg::read_node_csv(csv_dir / "exploitability.csv", 1);
    svg::LineChart conv{"exploitability", "N", "eps_N", {{"eps_N", eps.t, eps.value}}, true};
    figures.emplace_back("exploitability.svg", svg::render(conv));
    return figures;
}

ExperimentResult run_experiment(const RunConfig& config, std::ostream* progress) {
    const ModelSpec model = resolve_model(config);
    const GridSpec grid = resolve_grid(config, model);
    const CflReport cfl = validate_cfl(grid, model);
    if (!cfl.passed && !config.cfl_override) throw CflError(cfl.describe(grid));

    ExperimentResult result;
    result.directory = config.output_directory;
    std::error_code ec;
    fs::create_directories(result.directory, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + result.directory.string() + "': " + ec.message());
    // Fail on an unwritable directory before spending time on the run.
    { Staging probe(result.directory); }

    FpOptions options;
    options.iterations = config.iterations;
    options.method = config.method;
    options.early_stop = config.early_stop;
    options.cfl_override = config.cfl_override;
    options.lp = config.lp;
    options.reference_point = config.reference_point;
    options.compute_w1 = config.compute_w1;
    options.w1_max_exact_atoms = config.w1_max_exact_atoms;
    if (progress) {
        options.on_iteration = [progress](const IterationRecord& r) {
            char line[64];
            std::snprintf(line, sizeof line, "\riteration %zu  eps %.4e    ", r.n, r.exploitability);
            *progress << line << std::flush;
        };
    }

    const MeanField guess = initial_guess(grid, model);
    if (!config.lp_export_path.empty()) export_mps(build_lp(grid, model, guess, !config.cfl_override), config.lp_export_path);
    result.trace = lpfp_run(grid, model, guess, options);
    if (progress) *progress << "\n";

    const Support support(grid, model.kind);
    const MeanField& avg = result.trace.final_average;
    result.mu_total = avg.mu.sum();
    result.slope = loglog_slope(result.trace.records, 10, config.iterations);

    Staging staging(result.directory);
    std::vector<std::string> names;
    const auto stage = [&](const std::string& name, const std::string& text) {
        write_file(staging.path() / name, text);
        names.push_back(name);
    };
    const bool need_csv = config.wants("csv") || config.wants("svg");
    if (need_csv) {
        stage("exploitability.csv", exploitability_csv(result.trace, config.record_timings));
        stage("m_bar.csv", m_bar_csv(grid, support, avg));
        stage("mu_bar.csv", mu_bar_csv(grid, support, avg));
        if (model.kind == ProblemKind::control_absorption) stage("control.csv", control_csv(grid, support, avg));
    }
    if (config.wants("svg"))
        for (const auto& [name, text] : render_figures(staging.path(), model.kind)) stage(name, text);
    if (config.wants("json")) {
        nlohmann::ordered_json j;
        nlohmann::ordered_json settings;
        for (const auto& [k, v] : resolved_settings(config)) settings[k] = v;
        j["config"] = settings;
        const IterationRecord* last = result.trace.records.empty() ? nullptr : &result.trace.records.back();
        nlohmann::ordered_json summary;
        summary["iterations_run"] = result.trace.records.size();
        summary["completed"] = result.trace.completed;
        if (!result.trace.completed) summary["failure"] = result.trace.failure;
        summary["final_eps_raw"] = last ? last->exploitability : 0.0;
        summary["final_eps_clamped"] = last ? last->exploitability_clamped() : 0.0;
        if (std::isfinite(result.slope)) summary["loglog_slope"] = result.slope;
        else summary["loglog_slope"] = nullptr;
        summary["loglog_range"] = {10, config.iterations};
        // Steps whose w1_step is the path upper bound rather than exact transport.
        nlohmann::ordered_json surrogate = nlohmann::ordered_json::array();
        for (const IterationRecord& r : result.trace.records)
            if (!r.w1_exact && std::isfinite(r.w1_step)) surrogate.push_back(r.n);
        summary["w1_upper_bound_steps"] = surrogate;
        summary["mu_bar_total"] = result.mu_total;
        summary["cfl_max_dt"] = std::isfinite(cfl.max_dt) ? nlohmann::ordered_json(cfl.max_dt) : nullptr;
        summary["cfl_passed"] = cfl.passed;
        j["summary"] = summary;
        stage("run.json", j.dump(2) + "\n");
    }
    if (need_csv && !config.wants("csv"))
        for (const char* name : {"exploitability.csv", "m_bar.csv", "mu_bar.csv", "control.csv"})
            std::erase(names, std::string(name));

    for (const std::string& name : names) {
        fs::rename(staging.path() / name, result.directory / name);
        result.files.push_back(result.directory / name);
    }
    return result;
}

void export_lp(const RunConfig& config, const fs::path& path) {
    const ModelSpec model = resolve_model(config);
    const GridSpec grid = resolve_grid(config, model);
    const MeanField guess = initial_guess(grid, model);
    export_mps(build_lp(grid, model, guess, !config.cfl_override), path);
}

} // namespace lpfp
