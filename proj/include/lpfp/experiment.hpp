#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lpfp/config.hpp"
#include "lpfp/fp.hpp"

namespace lpfp {

struct ExperimentResult {
    RunTrace trace;
    std::filesystem::path directory;
    std::vector<std::filesystem::path> files;
    double mu_total = 0.0;
    double slope = 0.0;
};

/// Runs fictitious play as configured and writes the artifacts:
///   exploitability.csv  N,eps_raw,eps_clamped,dm_step,w1_step,wtv_step,seconds
///   m_bar.csv           t,x,mass        (state marginal of the averaged flow)
///   mu_bar.csv          t,x,mass        (averaged exit measure)
///   control.csv         t,x,alpha,in_game_mass   (control problems)
///   *.svg               figures rendered from the CSV files
///   run.json            resolved settings and summary
/// Files are staged in a temporary subdirectory and moved into place only
/// once everything has been written. A solver failure still writes the
/// partial trace; check result.trace.completed.
ExperimentResult run_experiment(const RunConfig& config, std::ostream* progress = nullptr);

/// Assembles the best-response program against the initial guess and
/// writes it as MPS.
void export_lp(const RunConfig& config, const std::filesystem::path& path);

/// Renders the figures of a run from the CSV files in `csv_dir`. Returns
/// (file name, SVG text) pairs.
std::vector<std::pair<std::string, std::string>> render_figures(const std::filesystem::path& csv_dir,
                                                                ProblemKind kind);

/// CSV text with fixed 17-significant-digit formatting.
std::string exploitability_csv(const RunTrace& trace, bool record_timings);

} // namespace lpfp
