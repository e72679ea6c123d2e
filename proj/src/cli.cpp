#include "adaptrand/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "adaptrand/config_io.hpp"
#include "adaptrand/monte_carlo.hpp"
#include "adaptrand/numerics.hpp"
#include "adaptrand/presets.hpp"
#include "adaptrand/report_io.hpp"
#include "adaptrand/statistics.hpp"
#include "adaptrand/verification.hpp"

namespace adaptrand::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240101;

struct RunOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::int64_t> iterations;
    std::uint64_t seed = kDefaultSeed;
    int workers = 0;
    std::string out_dir;
};

std::string hex_digest(std::uint64_t digest) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << digest;
    return out.str();
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << contents;
}

int command_run(const RunOptions& opts, std::ostream& out) {
    if (opts.config_path.empty() == opts.preset.empty())
        throw ValidationError("run: exactly one of --config or --preset is required");

    ScenarioPreset preset;
    if (!opts.config_path.empty()) {
        preset.name = "config";
        preset.scenarios.push_back(
            {fs::path(opts.config_path).stem().string(), parse_config(opts.config_path)});
    } else {
        preset = expand_preset(opts.preset);
    }
    const std::int64_t iterations = opts.iterations.value_or(preset.iterations);
    if (iterations < 1) throw ValidationError("--iterations: must be at least 1");
    const int workers =
        opts.workers > 0 ? opts.workers
                         : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    fs::path out_dir = opts.out_dir;
    if (out_dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        out_dir = (env && *env) ? fs::path(env) : fs::path(".");
    }
    fs::create_directories(out_dir);

    const auto started = std::chrono::steady_clock::now();
    std::vector<ScenarioReport> reports;
    for (const auto& scenario : preset.scenarios) {
        reports.push_back({scenario, run_oc(scenario.config, iterations, opts.seed, workers)});
        const auto& report = reports.back().report;
        out << scenario.label << ": overall " << format_fixed6(report.overall_power.rate)
            << " (se " << format_fixed6(report.overall_power.mc_se) << ")\n";
    }
    const double wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::ostringstream oc_csv;
    write_oc_csv(oc_csv, reports);
    write_file(out_dir / "oc_report.csv", oc_csv.str());
    std::ostringstream trajectories;
    write_trajectories_csv(trajectories, reports);
    write_file(out_dir / "trajectories.csv", trajectories.str());
    if (!preset.null_grid.empty()) {
        std::ostringstream scan;
        write_null_scan_csv(scan, preset.null_grid, reports);
        write_file(out_dir / "null_scan.csv", scan.str());
    }

    nlohmann::json manifest;
    manifest["tool"] = "adaptrand";
    manifest["preset"] = preset.name;
    if (!opts.config_path.empty()) manifest["config_path"] = opts.config_path;
    manifest["seed"] = opts.seed;
    manifest["iterations"] = iterations;
    manifest["workers"] = workers;
    manifest["wall_time_seconds"] = wall_seconds;
    std::uint64_t combined = 0xcbf29ce484222325ULL;
    for (const auto& [scenario, report] : reports) {
        const std::uint64_t digest = config_digest(scenario.config);
        manifest["scenarios"].push_back({{"label", scenario.label},
                                         {"config_digest", hex_digest(digest)},
                                         {"config", config_to_json(scenario.config)}});
        combined = mix64(combined ^ digest);
    }
    manifest["config_digest"] = hex_digest(combined);
    if (!preset.null_grid.empty()) manifest["null_grid"] = preset.null_grid;
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    out << "wrote " << (out_dir / "oc_report.csv").string() << '\n';
    return kOk;
}

int report_verdict(std::ostream& out, const std::string& check, bool passed) {
    out << check << ": " << (passed ? "PASS" : "FAIL") << '\n';
    return passed ? kOk : kVerificationFailed;
}

int command_lemma1(double c, double c_prime, int points, std::ostream& out) {
    if (points < 1) throw ValidationError("--grid: need at least one point");
    const auto report =
        verification::lemma1_monotonicity_check(c, c_prime, verification::uniform_w1_grid(points));
    out << std::setprecision(10);
    out << "c = " << c << ", c' = " << c_prime << "\n";
    for (std::size_t i = 0; i < report.grid.size(); ++i)
        out << "  w1 = " << report.grid[i] << "  Q = " << report.values[i] << '\n';
    out << "max increase " << report.max_violation << " (tolerance " << report.tolerance
        << ", quadrature error <= " << verification::kLemma1Tolerance << ")\n";
    return report_verdict(out, "lemma1 monotonicity", report.passed);
}

void print_bound(std::ostream& out, const verification::BoundResult& r) {
    out << std::setprecision(10) << "  probability " << r.probability << " vs alpha " << r.alpha
        << " (+" << r.tolerance << ")";
    if (r.mc_se > 0.0) out << ", mc_se " << r.mc_se;
    out << "\n  regions:";
    for (std::size_t k = 0; k < r.terms.size(); ++k)
        out << " [p=" << r.region_probabilities[k] << " reject=" << r.terms[k]
            << " chw=" << r.chw_terms[k] << "]";
    out << '\n';
}

int command_theorem1(const verification::TheoremQuery& q, int sweep, std::uint64_t seed,
                     std::ostream& out) {
    if (sweep <= 0) {
        const auto result = verification::theorem1_rejection_bound(q);
        print_bound(out, result);
        return report_verdict(out, "theorem1 bound", result.bound_ok);
    }
    bool passed = true;
    double worst_excess = -1.0;
    double worst_exactness = 0.0;
    for (const auto& query : verification::random_two_arm_queries(sweep, seed)) {
        const auto result = verification::theorem1_rejection_bound(query);
        passed = passed && result.bound_ok;
        worst_excess = std::max(worst_excess, result.probability - query.alpha);
        if (query.betas[0] == query.betas[1])
            worst_exactness =
                std::max(worst_exactness, std::abs(result.probability - query.alpha));
    }
    passed = passed && worst_exactness <= 1e-6;
    out << std::setprecision(6) << sweep << " random designs: max(prob - alpha) = " << worst_excess
        << ", max |prob - alpha| when beta1 = beta2: " << worst_exactness
        << " (tolerance 1e-06)\n";
    return report_verdict(out, "theorem1 sweep", passed);
}

int command_theorem3(const verification::TheoremQuery& q, std::int64_t draws, std::uint64_t seed,
                     std::ostream& out) {
    const auto result = verification::theorem3_rejection_bound(q, draws, seed);
    print_bound(out, result);
    return report_verdict(out, "theorem3 bound", result.bound_ok);
}

int command_w1_ordering(int n1, int n2_0, int n0, double beta1, double beta2, int sweep,
                        std::uint64_t seed, std::ostream& out) {
    if (sweep > 0) {
        const auto result = verification::w1_ordering_sweep(sweep, seed);
        out << result.samples << " samples, " << result.failures << " violations\n";
        return report_verdict(out, "w1 ordering sweep", result.failures == 0);
    }
    const bool ok = verification::w1_ordering_check(n1, n2_0, n0, beta1, beta2);
    out << std::setprecision(10) << "w1(beta1) = " << weight_w1(n1, beta1 * n2_0, n0)
        << ", w1(beta2) = " << weight_w1(n1, beta2 * n2_0, n0) << '\n';
    return report_verdict(out, "w1 ordering", ok);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation and verification of response-adaptive randomized trials",
                 "adaptrand"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "Simulate operating characteristics");
    auto* config_opt = run_cmd->add_option("--config", run_opts.config_path, "JSON design file");
    auto* preset_opt = run_cmd->add_option("--preset", run_opts.preset,
                                           "table1|table2|table3|figure1|case-study|figure2");
    config_opt->excludes(preset_opt);
    run_cmd->add_option("--iterations", run_opts.iterations, "Trials per scenario");
    run_cmd->add_option("--seed", run_opts.seed, "Master seed")->capture_default_str();
    run_cmd->add_option("--workers", run_opts.workers, "Worker threads (default: all cores)");
    run_cmd->add_option("--out", run_opts.out_dir, "Output directory (default: $ADAPTRAND_OUT or .)");

    auto* verify_cmd = app.add_subcommand("verify", "Numerical checks of the error-rate results");
    verify_cmd->require_subcommand(1);

    double c = 1.959963984540054;
    double c_prime = 0.0;
    int grid = 17;
    auto* lemma1 = verify_cmd->add_subcommand("lemma1", "Monotonicity of Q(w1)");
    lemma1->add_option("--c", c, "Critical value")->capture_default_str();
    lemma1->add_option("--c-prime", c_prime, "Ranking shift")->capture_default_str();
    lemma1->add_option("--grid", grid, "Number of w1 grid points")->capture_default_str();

    verification::TheoremQuery t1{{20, 20}, 8, {1.0, 1.0 / 9.0}, 48, 0.025, 0.0};
    int sweep = 0;
    std::uint64_t seed = kDefaultSeed;
    auto* theorem1 = verify_cmd->add_subcommand("theorem1", "Two-arm rejection bound");
    theorem1->add_option("--n1", t1.n1_per_arm, "Stage-1 sizes of arms 1,2")->delimiter(',');
    theorem1->add_option("--n2-placebo", t1.n2_placebo);
    theorem1->add_option("--betas", t1.betas, "beta1,beta2")->delimiter(',');
    theorem1->add_option("--n0", t1.n0, "Cumulative placebo size");
    theorem1->add_option("--alpha", t1.alpha);
    theorem1->add_option("--mu0", t1.mu0);
    theorem1->add_option("--sweep", sweep, "Check this many random designs instead");
    theorem1->add_option("--seed", seed);

    verification::TheoremQuery t3{{20, 20, 20}, 8, {7.0 / 8.0, 5.0 / 8.0, 1.0 / 8.0}, 48, 0.025, 0.0};
    std::int64_t draws = 10'000'000;
    auto* theorem3 = verify_cmd->add_subcommand("theorem3", "Three-arm rejection bound");
    theorem3->add_option("--n1", t3.n1_per_arm, "Stage-1 sizes of arms 1,2,3")->delimiter(',');
    theorem3->add_option("--n2-placebo", t3.n2_placebo);
    theorem3->add_option("--betas", t3.betas, "beta1,beta2,beta3")->delimiter(',');
    theorem3->add_option("--n0", t3.n0);
    theorem3->add_option("--alpha", t3.alpha);
    theorem3->add_option("--mu0", t3.mu0);
    theorem3->add_option("--draws", draws)->capture_default_str();
    theorem3->add_option("--seed", seed);

    int n1 = 20, n2_0 = 8, n0 = 42;
    double beta1 = 1.0, beta2 = 1.0 / 9.0;
    auto* ordering = verify_cmd->add_subcommand("w1-ordering", "Weight ordering inequality");
    ordering->add_option("--n1", n1);
    ordering->add_option("--n2-placebo", n2_0);
    ordering->add_option("--n0", n0);
    ordering->add_option("--beta1", beta1);
    ordering->add_option("--beta2", beta2);
    ordering->add_option("--sweep", sweep, "Check this many random inputs instead");
    ordering->add_option("--seed", seed);

    std::vector<char*> argv;
    std::vector<std::string> storage(args);
    for (auto& a : storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kValidationError;
    }

    try {
        if (run_cmd->parsed()) return command_run(run_opts, out);
        if (lemma1->parsed()) return command_lemma1(c, c_prime, grid, out);
        if (theorem1->parsed()) return command_theorem1(t1, sweep, seed, out);
        if (theorem3->parsed()) return command_theorem3(t3, draws, seed, out);
        if (ordering->parsed())
            return command_w1_ordering(n1, n2_0, n0, beta1, beta2, sweep, seed, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kValidationError;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace adaptrand::cli
