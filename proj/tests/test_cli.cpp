#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "adaptrand/cli.hpp"

namespace fs = std::filesystem;
using adaptrand::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "adaptrand");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("adaptrand_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

const std::string kConfig = std::string(ADAPTRAND_CONFIG_DIR) + "/rabr_mu_a.json";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run with a config writes the report, trajectories and manifest") {
    const fs::path dir = scratch("config");
    const auto r = invoke({"run", "--config", kConfig, "--iterations", "200", "--seed", "7", "--out",
                           dir.string()});
    REQUIRE(r.code == 0);
    const std::string csv = slurp(dir / "oc_report.csv");
    CHECK(csv.rfind("scenario,metric,group,value,mc_se\n", 0) == 0);
    CHECK(csv.find("rabr_mu_a,overall_power,overall,") != std::string::npos);
    CHECK(csv.find("rabr_mu_a,avg_n_by_rank,S3,") != std::string::npos);
    const std::string trajectories = slurp(dir / "trajectories.csv");
    CHECK(trajectories.rfind("scenario,checkpoint,rank,mean_proportion\n", 0) == 0);
    CHECK(trajectories.find("rabr_mu_a,60,placebo,") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "null_scan.csv"));

    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["seed"] == 7);
    CHECK(manifest["iterations"] == 200);
    CHECK(manifest["config_digest"].is_string());
    CHECK(manifest.contains("wall_time_seconds"));

    // rerunning from the manifest's seed reproduces the files byte for byte
    const fs::path again = scratch("config_again");
    REQUIRE(invoke({"run", "--config", kConfig, "--iterations", "200", "--seed", "7", "--workers", "3",
                    "--out", again.string()})
                .code == 0);
    CHECK(slurp(again / "oc_report.csv") == csv);
    CHECK(slurp(again / "trajectories.csv") == trajectories);
    const auto second = nlohmann::json::parse(slurp(again / "manifest.json"));
    CHECK(second["config_digest"] == manifest["config_digest"]);
}

TEST_CASE("the figure2 preset writes one null-scan row per grid point") {
    const fs::path dir = scratch("figure2");
    REQUIRE(invoke({"run", "--preset", "figure2", "--iterations", "50", "--out", dir.string()}).code == 0);
    std::istringstream scan(slurp(dir / "null_scan.csv"));
    std::string header, line;
    std::getline(scan, header);
    CHECK(header ==
          "p0,pairwise_D1,pairwise_D1_se,pairwise_D2,pairwise_D2_se,bonferroni_fwer,bonferroni_fwer_se");
    int rows = 0;
    while (std::getline(scan, line)) ++rows;
    CHECK(rows == 19);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["null_grid"].size() == 19);
}

TEST_CASE("the output directory falls back to the environment") {
    const fs::path dir = scratch("env");
    ::setenv(adaptrand::cli::kOutDirEnv, dir.string().c_str(), 1);
    const auto r = invoke({"run", "--config", kConfig, "--iterations", "5"});
    ::unsetenv(adaptrand::cli::kOutDirEnv);
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "oc_report.csv"));
}

TEST_CASE("validation failures exit with 1") {
    CHECK(invoke({"run", "--config", kConfig, "--iterations", "0"}).code == 1);
    CHECK(invoke({"run", "--preset", "table9", "--iterations", "5"}).code == 1);
    CHECK(invoke({"run"}).code == 1);
    CHECK(invoke({"run", "--config", kConfig, "--preset", "table1"}).code == 1);
    CHECK(invoke({"run", "--config", "/nonexistent.json"}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"verify", "theorem1", "--betas", "0.2,0.9"}).code == 1);
    CHECK(invoke({"verify", "lemma1", "--grid", "0"}).code == 1);

    const fs::path dir = scratch("bad_config");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << "{\"arms\": 4}";
    const auto r = invoke({"run", "--config", (dir / "bad.json").string(), "--iterations", "5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("endpoint") != std::string::npos);
}

TEST_CASE("verification commands") {
    const auto lemma = invoke({"verify", "lemma1", "--c", "1.959964", "--c-prime", "0", "--grid", "17"});
    CHECK(lemma.code == 0);
    CHECK(lemma.out.find("PASS") != std::string::npos);
    CHECK(invoke({"verify", "lemma1", "--c", "1.0", "--c-prime", "-2"}).code == 0);
    CHECK(invoke({"verify", "theorem1"}).code == 0);
    CHECK(invoke({"verify", "theorem1", "--n1", "12,30", "--betas", "2,0.5", "--mu0", "1"}).code == 0);
    CHECK(invoke({"verify", "theorem1", "--sweep", "100"}).code == 0);
    CHECK(invoke({"verify", "theorem3", "--draws", "100000"}).code == 0);
    CHECK(invoke({"verify", "w1-ordering"}).code == 0);
    CHECK(invoke({"verify", "w1-ordering", "--sweep", "10000"}).code == 0);
}

TEST_CASE("a failed check exits with 3") {
    // A single Monte Carlo draw that lands in the rejection region has zero
    // standard error, so the bound check fails.
    const auto r = invoke({"verify", "theorem3", "--draws", "1", "--alpha", "0.45", "--seed", "4"});
    CHECK(r.code == 3);
    CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
    const auto r = invoke({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("run") != std::string::npos);
}

}
