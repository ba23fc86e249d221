// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lpfp/dp.hpp"
#include "lpfp/fp.hpp"
#include "lpfp/lp.hpp"
#include "lpfp/metrics.hpp"
#include "oracles.hpp"

using namespace lpfp;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Convex mixture of the laws of three random Markov policies.
MeanField random_feasible(const GridSpec& grid, const ModelSpec& model, const TransitionTable& table,
                          const DiscreteInitialLaw& initial, std::mt19937_64& rng) {
    const std::uint32_t choices =
        model.kind == ProblemKind::stopping ? 2u : static_cast<std::uint32_t>(grid.n_actions());
    std::uniform_real_distribution<double> u(0.1, 1.0);
    MeanField mix;
    double total = 0.0;
    for (int part = 0; part < 3; ++part) {
        std::vector<std::uint32_t> policy(grid.n_t * (grid.n_s - 1));
        for (auto& p : policy) p = static_cast<std::uint32_t>(rng() % choices);
        const MeanField law = propagate_policy(grid, table, initial, policy);
        const double w = u(rng);
        mix = part == 0 ? law : combine(mix, total / (total + w), law, w / (total + w));
        total += w;
    }
    return mix;
}

struct EquivalenceOutcome {
    double worst_gap = 0.0;       // |lp - dp| / (1 + |dp|)
    double worst_residual = 0.0;  // DP measures in the LP rows
    double worst_mass = 0.0;      // |sum mu - 1|
    bool all_optimal = true;
};

EquivalenceOutcome lp_dp_equivalence(const ModelSpec& model, const GridSpec& grid, int samples, std::uint64_t seed) {
    EquivalenceOutcome out;
    const TransitionTable table(grid, model);
    const DiscreteInitialLaw initial = discretize_initial(model, grid);
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        const MeanField mf = random_feasible(grid, model, table, initial, rng);
        const LinearProgram lp = build_lp(grid, model, mf);
        const LPSolution sol = solve_lp(lp);
        out.all_optimal = out.all_optimal && sol.status == SolveStatus::optimal;
        const BestResponse br = best_response(grid, model, mf);
        out.worst_gap = std::max(out.worst_gap, std::abs(sol.objective_value - br.value) / (1.0 + std::abs(br.value)));

        Eigen::VectorXd x(lp.num_cols());
        x << br.measures.mu, br.measures.m;
        out.worst_residual = std::max(out.worst_residual, (lp.constraints * x - lp.rhs).cwiseAbs().maxCoeff());
        // Summing every row: the flow terms telescope away.
        const double summed = (lp.constraints * x).sum();
        out.worst_mass = std::max({out.worst_mass, std::abs(summed - 1.0), std::abs(br.measures.mu.sum() - 1.0)});
    }
    return out;
}

struct ConvergenceRun {
    std::string name;
    GridSpec grid;
    RunTrace trace;
    double seconds = 0.0;
};

ConvergenceRun converge(const std::string& name, std::size_t n_t, std::size_t n_s, std::size_t n_a) {
    ConvergenceRun run;
    run.name = name;
    const ModelSpec model = builtin_model(name);
    run.grid = default_grid(model, n_t, n_s, n_a);
    FpOptions opts;
    // Step N + 1 compares the averages N and N + 1, so one extra step is run.
    opts.iterations = 201;
    opts.method = BestResponseMethod::dp;
    const auto start = Clock::now();
    run.trace = lpfp_run(run.grid, model, initial_guess(run.grid, model), opts);
    run.seconds = seconds_since(start);
    return run;
}

const IterationRecord& record(const RunTrace& t, std::size_t n) { return t.records.at(n - 1); }

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

int main() {
    // 1 and 2: LP optimum against the DP oracle, DP measures against the LP rows.
    {
        const auto start = Clock::now();
        const ModelSpec os = builtin_model("os_example");
        const ModelSpec sc = builtin_model("control_example");
        // 30 states on ]-2, 2[ need n_t >= 64 for the chain to be stable.
        const EquivalenceOutcome a = lp_dp_equivalence(os, default_grid(os, 20, 40, 0), 25, 1);
        const EquivalenceOutcome b = lp_dp_equivalence(sc, default_grid(sc, 64, 30, 5), 25, 2);
        const double elapsed = seconds_since(start);
        const double gap = std::max(a.worst_gap, b.worst_gap);
        report(1, a.all_optimal && b.all_optimal && gap <= 1e-8 && elapsed <= 120.0,
               "os 20x40 and control 64x30x5, 25 mean fields each: max |lp-dp|/(1+|dp|) = " + fmt("%.3g", gap) +
                   ", " + fmt("%.1f s", elapsed));
        const double residual = std::max(a.worst_residual, b.worst_residual);
        const double mass = std::max(a.worst_mass, b.worst_mass);
        report(2, residual <= 1e-12 && mass <= 1e-9,
               "max row residual " + fmt("%.3g", residual) + ", max |sum mu - 1| " + fmt("%.3g", mass));
    }

    // 3: stability bound for sigma = b = 1, delta_x = 0.2.
    {
        ModelSpec model = builtin_model("os_example");
        const GridSpec fine = build_grid(1.0, 100, 0.0, 2.0, 10);
        const GridSpec coarse = build_grid(1.0, 20, 0.0, 2.0, 10);
        const double bound = cfl_max_dt(fine, model);
        const bool pass_fine = validate_cfl(fine, model).passed;
        const bool pass_coarse = validate_cfl(coarse, model).passed;
        report(3, std::abs(bound - 1.0 / 30.0) <= 1e-12 && pass_fine && !pass_coarse,
               "bound " + fmt("%.15g", bound) + ", dt 0.01 " + (pass_fine ? "passes" : "fails") + ", dt 0.05 " +
                   (pass_coarse ? "passes" : "fails"));
    }

    // 4 to 7 share two long runs.
    const ConvergenceRun runs[] = {converge("os_example", 50, 80, 0), converge("control_example", 280, 64, 5)};

    {
        bool pass = true;
        std::string detail;
        for (const ConvergenceRun& r : runs) {
            std::vector<IterationRecord> first(r.trace.records.begin(), r.trace.records.begin() + 200);
            const double slope = loglog_slope(first, 10, 200);
            const double e5 = record(r.trace, 5).exploitability, e200 = record(r.trace, 200).exploitability;
            const bool ok = r.trace.completed && slope >= -1.4 && slope <= -0.6 && e200 <= e5 / 10.0 &&
                            r.seconds <= 600.0;
            pass = pass && ok;
            detail += r.name + " " + std::to_string(r.grid.n_t) + "x" + std::to_string(r.grid.n_s) +
                      (r.grid.has_actions() ? "x" + std::to_string(r.grid.actions.size()) : std::string()) +
                      ": slope " + fmt("%.3f", slope) + ", eps200/eps5 " + fmt("%.3g", e200 / e5) + ", " +
                      fmt("%.1f s", r.seconds) + "; ";
        }
        report(4, pass, detail);
    }
    {
        double lowest = std::numeric_limits<double>::infinity();
        for (const ConvergenceRun& r : runs)
            for (const IterationRecord& rec : r.trace.records) lowest = std::min(lowest, rec.exploitability);
        report(5, lowest >= -1e-9, "min eps over both runs " + fmt("%.3g", lowest));
    }
    {
        bool pass = true;
        std::string detail;
        for (const ConvergenceRun& r : runs) {
            // N * distance(average N, average N + 1), from N = 5 on.
            const auto scaled = [&](std::size_t n, bool flow) {
                const IterationRecord& rec = record(r.trace, n + 1);
                return static_cast<double>(n) * (flow ? rec.dm_step : rec.wtv_step);
            };
            double worst_dm = 0.0, worst_tv = 0.0;
            for (std::size_t n = 5; n <= 200; ++n) {
                worst_dm = std::max(worst_dm, scaled(n, true) / scaled(5, true));
                worst_tv = std::max(worst_tv, scaled(n, false) / scaled(5, false));
            }
            pass = pass && worst_dm <= 2.0 && worst_tv <= 2.0;
            detail += r.name + ": max ratio to N=5 d_M " + fmt("%.3f", worst_dm) + ", wTV " + fmt("%.3f", worst_tv) +
                      "; ";
        }
        report(6, pass, detail);
    }
    {
        // Stopping: in-game mean state rises after t = 0.2; the t = 0 exits sit low.
        const ConvergenceRun& os = runs[0];
        const Support s_os(os.grid, ProblemKind::stopping);
        const Eigen::MatrixXd flow = state_marginals(s_os, os.trace.final_average.m);
        const Eigen::MatrixXd exits = exit_on_grid(s_os, os.trace.final_average.mu);
        bool rising = true;
        double previous = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < os.grid.n_t; ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            const double mass = flow.row(r).sum();
            if (mass <= 0.0) continue;
            double mean = 0.0;
            for (std::size_t j = 0; j <= os.grid.n_s; ++j) mean += os.grid.state(j) * flow(r, static_cast<Eigen::Index>(j));
            mean /= mass;
            if (os.grid.time(i) >= 0.2 - 1e-12) {
                rising = rising && mean >= previous - 1e-12;
                previous = mean;
            }
        }
        double early = 0.0, early_moment = 0.0, early_low = 0.0;
        for (std::size_t j = 0; j <= os.grid.n_s; ++j) {
            const double w = exits(0, static_cast<Eigen::Index>(j));
            early += w;
            early_moment += w * os.grid.state(j);
            if (os.grid.state(j) < 0.0) early_low += w;
        }
        const double early_mean = early > 0.0 ? early_moment / early : 0.0;
        const bool low_exit = early > 0.0 && early_mean < 0.0 && early_low > 0.5 * early;

        const ConvergenceRun& sc = runs[1];
        const Support s_sc(sc.grid, ProblemKind::control_absorption);
        const Eigen::MatrixXd alpha = extract_markov_control(sc.grid, s_sc, sc.trace.final_average);
        const auto at = [&](double t, double x) {
            return alpha(static_cast<Eigen::Index>(sc.grid.nearest_time_index(t)),
                         static_cast<Eigen::Index>(sc.grid.nearest_state_index(x)));
        };
        const double a_early = at(0.1, 0.5), a_late = at(0.9, 0.5);
        report(7, rising && low_exit && a_early > 0.0 && a_late < 0.0,
               std::string("os in-game mean nondecreasing after t=0.2: ") + (rising ? "yes" : "no") +
                   ", t=0 exit mass " + fmt("%.3g", early) + " with mean state " + fmt("%.3g", early_mean) +
                   "; control alpha(0.1,0.5) = " + fmt("%.3g", a_early) + ", alpha(0.9,0.5) = " + fmt("%.3g", a_late));
    }

    // 8: metrics against brute force, and axioms.
    {
        std::mt19937_64 rng(8);
        std::uniform_int_distribution<int> count(1, 6), node(-8, 8);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const auto subprob = [&]() {
            DiscreteSubprob s;
            const int n = count(rng);
            const double total = u(rng);
            double sum = 0.0;
            for (int k = 0; k < n; ++k) {
                s.x.push_back(0.25 * node(rng));
                s.mass.push_back(u(rng));
                sum += s.mass.back();
            }
            for (double& m : s.mass) m *= total / sum;
            return s;
        };
        double dual_gap = 0.0;
        bool axioms = true;
        for (int trial = 0; trial < 1000; ++trial) {
            const DiscreteSubprob a = subprob(), b = subprob(), c = subprob();
            const double x0 = 0.25 * node(rng) + 0.1;
            const double ab = w1_prime(a, b, x0);
            dual_gap = std::max(dual_gap, std::abs(ab - oracle::w1_prime_dual(a, b, x0)));
            axioms = axioms && ab >= 0.0 && std::abs(ab - w1_prime(b, a, x0)) <= 1e-12 && w1_prime(a, a, x0) == 0.0 &&
                     ab <= w1_prime(a, c, x0) + w1_prime(c, b, x0) + 1e-12;
        }

        const ModelSpec model = builtin_model("os_example");
        const GridSpec grid = build_grid(1.0, 5, -1.0, 1.0, 6);
        const Support support(grid, model.kind);
        const auto exit_measure = [&](int atoms, int units) {
            Eigen::VectorXd mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(support.mu_size()));
            std::vector<int> share(static_cast<std::size_t>(atoms), 1);
            for (int k = atoms; k < units; ++k) ++share[rng() % share.size()];
            for (int k = 0; k < atoms; ++k)
                mu(static_cast<Eigen::Index>(rng() % support.mu_size())) += share[static_cast<std::size_t>(k)] / double(units);
            return mu;
        };
        double transport_gap = 0.0;
        bool exact = true;
        for (int trial = 0; trial < 100; ++trial) {
            const int units = 7;
            const Eigen::VectorXd a = exit_measure(1 + static_cast<int>(rng() % 5), units);
            const Eigen::VectorXd b = exit_measure(1 + static_cast<int>(rng() % 5), units);
            const Eigen::VectorXd c = exit_measure(1 + static_cast<int>(rng() % 5), units);
            std::vector<double> ta, xa, tb, xb;
            std::vector<int> ua, ub;
            for (std::size_t idx = 0; idx < support.mu_size(); ++idx) {
                const auto [i, j] = support.mu_node(idx);
                const int na = static_cast<int>(std::lround(a(static_cast<Eigen::Index>(idx)) * units));
                const int nb = static_cast<int>(std::lround(b(static_cast<Eigen::Index>(idx)) * units));
                if (na > 0) { ta.push_back(grid.time(i)); xa.push_back(grid.state(j)); ua.push_back(na); }
                if (nb > 0) { tb.push_back(grid.time(i)); xb.push_back(grid.state(j)); ub.push_back(nb); }
            }
            const W1Estimate ab = w1_exit(support, a, b, grid);
            exact = exact && ab.exact;
            transport_gap = std::max(transport_gap, std::abs(ab.value - oracle::w1_assignment(ta, xa, ua, tb, xb, ub)));
            const double ba = w1_exit(support, b, a, grid).value;
            axioms = axioms && ab.value >= 0.0 && std::abs(ab.value - ba) <= 1e-12 &&
                     w1_exit(support, a, a, grid).value == 0.0 &&
                     ab.value <= w1_exit(support, a, c, grid).value + w1_exit(support, c, b, grid).value + 1e-12;
        }
        report(8, dual_gap <= 1e-10 && transport_gap <= 1e-9 && exact && axioms,
               "w1_prime vs dual max gap " + fmt("%.3g", dual_gap) + " (1000 pairs), w1_exit vs matching max gap " +
                   fmt("%.3g", transport_gap) + " (100 pairs), axioms " + (axioms ? "hold" : "violated"));
    }

    // 9: two runs of the command-line tool give byte-identical tables.
    {
        const fs::path dir = fs::temp_directory_path() / "lpfp_acceptance_determinism";
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::ofstream(dir / "run.cfg") << "problem.name = control_example\n"
                                          "grid.n_t = 120\ngrid.n_s = 24\ngrid.n_a = 5\n"
                                          "fp.iterations = 25\n";
        int status = 0;
        for (const char* sub : {"a", "b"}) {
            const std::string cmd = std::string(LPFP_CLI_PATH) + " run --config " + (dir / "run.cfg").string() +
                                    " --out " + (dir / sub).string() + " >/dev/null 2>&1";
            status |= std::system(cmd.c_str());
        }
        bool same = status == 0;
        std::size_t compared = 0;
        for (const char* name : {"exploitability.csv", "m_bar.csv", "mu_bar.csv", "control.csv"}) {
            const std::string a = slurp(dir / "a" / name), b = slurp(dir / "b" / name);
            same = same && !a.empty() && a == b;
            ++compared;
        }
        fs::remove_all(dir);
        report(9, same, std::to_string(compared) + " CSV files compared across two CLI runs: " +
                            (same ? "byte-identical" : "differ"));
    }

    return failures == 0 ? 0 : 1;
}
