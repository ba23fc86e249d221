// mfg-lpfp: fictitious play for mean-field games of stopping and of control
// with absorption, through occupation-measure linear programs.
//
//   mfg-lpfp run --config <path> [--out <dir>] [--method lp|dp] [--iters N]
//   mfg-lpfp validate --config <path>
//   mfg-lpfp export-lp --config <path> --out <file.mps>
//
// Exit codes: 0 success, 1 I/O or other failure, 2 config error,
// 3 CFL failure, 4 solver failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lpfp/config.hpp"
#include "lpfp/errors.hpp"
#include "lpfp/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;
constexpr int kCflError = 3;
constexpr int kSolverError = 4;

int run_command(const std::string& config_path, const std::string& out, const std::string& method, std::size_t iters) {
    lpfp::RunConfig config = lpfp::load_config(config_path);
    if (!out.empty()) config.output_directory = out;
    if (!method.empty()) config.method = lpfp::parse_method(method);
    if (iters > 0) config.iterations = iters;
    const lpfp::ExperimentResult result = lpfp::run_experiment(config, &std::cerr);
    for (const auto& f : result.files) std::cout << f.string() << "\n";
    if (!result.trace.completed) {
        std::cerr << "solver failure: " << result.trace.failure << "\n";
        return kSolverError;
    }
    if (!result.trace.records.empty())
        std::cout << "final exploitability " << result.trace.records.back().exploitability << ", log-log slope "
                  << result.slope << "\n";
    return kOk;
}

int validate_command(const std::string& config_path) {
    const lpfp::ConfigReport report = lpfp::validate_config(config_path);
    if (!report.error.empty()) {
        std::cout << "FAIL: " << report.error << "\n";
        return kConfigError;
    }
    for (const auto& [k, v] : report.settings) std::cout << k << " = " << v << "\n";
    std::cout << report.cfl_text << "\n";
    std::cout << (report.ok ? "PASS" : "FAIL") << "\n";
    return report.ok ? kOk : kCflError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear-programming fictitious play for mean-field games"};
    app.require_subcommand(1);

    std::string config_path, out, method;
    std::size_t iters = 0;

    auto* run = app.add_subcommand("run", "run fictitious play and write the artifacts");
    run->add_option("--config", config_path, "run configuration file")->required();
    run->add_option("--out", out, "output directory (overrides output.directory)");
    run->add_option("--method", method, "best-response method")->check(CLI::IsMember({"lp", "dp"}));
    run->add_option("--iters", iters, "number of fictitious-play iterations")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "parse a configuration and report resolved settings");
    validate->add_option("--config", config_path, "run configuration file")->required();

    std::string mps_out;
    auto* export_cmd = app.add_subcommand("export-lp", "write the best-response LP against the initial guess as MPS");
    export_cmd->add_option("--config", config_path, "run configuration file")->required();
    export_cmd->add_option("--out", mps_out, "MPS output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) return run_command(config_path, out, method, iters);
        if (*validate) return validate_command(config_path);
        if (*export_cmd) {
            lpfp::export_lp(lpfp::load_config(config_path), mps_out);
            std::cout << mps_out << "\n";
            return kOk;
        }
    } catch (const lpfp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const lpfp::CflError& e) {
        std::cerr << "CFL failure: " << e.what() << "\n";
        return kCflError;
    } catch (const lpfp::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolverError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}
