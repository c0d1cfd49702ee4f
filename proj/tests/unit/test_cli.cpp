#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fcm/config_io.hpp"
#include "fcm/engine.hpp"
#include "fcm/rng.hpp"
#include "fcm/stats.hpp"
#include "support/support.hpp"

namespace fs = std::filesystem;
using testsup::run_cmd;

namespace {

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

const char* kSmallConfig = R"([model]
b = 1
gamma = 0.05
sigma = 0.1

[run]
n_initial = 50
steps = 2000
seed = 11
)";

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

} // namespace

TEST_CASE("usage errors exit 1") {
    const auto bin = testsup::fcmsim_bin();
    CHECK(run_cmd(bin).exit_code == 1);
    CHECK(run_cmd(bin + " bogus_subcommand").exit_code == 1);
    CHECK(run_cmd(bin + " simulate").exit_code == 1); // --config required
    const auto help = run_cmd(bin + " --help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("simulate") != std::string::npos);
}

TEST_CASE("simulate writes a complete deterministic run directory") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_sim");
    write_file(dir / "config.ini", kSmallConfig);

    const auto res = run_cmd(bin + " simulate --config " + q(dir / "config.ini") +
                             " --out " + q(dir / "out_a"));
    CHECK(res.exit_code == 0);
    REQUIRE(fs::exists(dir / "out_a/timeseries.csv"));
    REQUIRE(fs::exists(dir / "out_a/manifest.json"));
    REQUIRE(fs::exists(dir / "out_a/config.ini"));

    SUBCASE("manifest checksums match the files and are stable across reruns") {
        const auto res2 = run_cmd(bin + " simulate --config " + q(dir / "config.ini") +
                                  " --out " + q(dir / "out_b"));
        REQUIRE(res2.exit_code == 0);
        CHECK(fcm::sha256_file(dir / "out_a/timeseries.csv") ==
              fcm::sha256_file(dir / "out_b/timeseries.csv"));

        nlohmann::json ja, jb;
        std::ifstream(dir / "out_a/manifest.json") >> ja;
        std::ifstream(dir / "out_b/manifest.json") >> jb;
        CHECK(ja["outputs"] == jb["outputs"]);
        // the manifest checksum of each artifact matches the artifact
        for (const auto& entry : ja["outputs"]) {
            CHECK(entry["sha256"] ==
                  fcm::sha256_file(dir / "out_a" / entry["path"].get<std::string>()));
        }
    }
    SUBCASE("--seed override changes the path") {
        const auto res3 = run_cmd(bin + " simulate --config " + q(dir / "config.ini") +
                                  " --seed 12 --out " + q(dir / "out_c"));
        REQUIRE(res3.exit_code == 0);
        CHECK(fcm::sha256_file(dir / "out_a/timeseries.csv") !=
              fcm::sha256_file(dir / "out_c/timeseries.csv"));
    }
    fs::remove_all(dir);
}

TEST_CASE("validation failures exit 2 naming the field") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_bad");
    write_file(dir / "bad.ini", "[model]\ngamma = -0.1\n[run]\nsteps = 100\n");
    const auto res = run_cmd(bin + " simulate --config " + q(dir / "bad.ini") +
                             " --out " + q(dir / "out"));
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("gamma") != std::string::npos);

    write_file(dir / "hyst.ini",
               "[run]\nsteps = 100\nn_policy = selforg\n[selforg]\n"
               "theta_in = 1\ntheta_out = 2\n");
    const auto res2 = run_cmd(bin + " simulate --config " + q(dir / "hyst.ini") +
                              " --out " + q(dir / "out2"));
    CHECK(res2.exit_code == 2);
    CHECK(res2.output.find("theta_out") != std::string::npos);

    const auto res3 = run_cmd(bin + " simulate --config " + q(dir / "missing.ini") +
                              " --out " + q(dir / "out3"));
    CHECK(res3.exit_code == 3); // io failure
    fs::remove_all(dir);
}

TEST_CASE("numeric overflow exits 3 with flagged partial output") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_ovf");
    write_file(dir / "explosive.ini", R"([model]
b = 10
gamma = 0
sigma = 1
r = 0
horizons = 2

[run]
n_initial = 10
init_chartist_fraction = 1
steps = 10000
seed = 3
)");
    const auto res = run_cmd(bin + " simulate --config " + q(dir / "explosive.ini") +
                             " --out " + q(dir / "out"));
    CHECK(res.exit_code == 3);
    REQUIRE(fs::exists(dir / "out/manifest.json"));
    nlohmann::json j;
    std::ifstream(dir / "out/manifest.json") >> j;
    CHECK(j["status"] == "overflow");
    fs::remove_all(dir);
}

TEST_CASE("selforg subcommand forces the policy") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_so");
    write_file(dir / "so.ini", R"([model]
sigma = 0.1

[run]
n_initial = 100
steps = 5000
seed = 7

[selforg]
theta_in = 0.02
theta_out = 0.01
window = 50
n_min = 20
n_max = 300
)");
    const auto res = run_cmd(bin + " selforg --config " + q(dir / "so.ini") +
                             " --out " + q(dir / "out"));
    REQUIRE(res.exit_code == 0);
    const auto data = fcm::read_timeseries(dir / "out/timeseries.csv");
    bool n_changed = false;
    for (int n : data.n) n_changed = n_changed || n != data.n.front();
    CHECK(n_changed);
    fs::remove_all(dir);
}

TEST_CASE("environment variable sets the default output directory") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_env");
    write_file(dir / "config.ini", kSmallConfig);
    const auto res = run_cmd("FCMSIM_OUT=" + q(dir / "envout") + " " + bin +
                             " simulate --config " + q(dir / "config.ini"));
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(dir / "envout/timeseries.csv"));
    fs::remove_all(dir);
}

TEST_CASE("preset runs its bundle") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_preset");
    const auto res = run_cmd(bin + " preset bogus --out " + q(dir));
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("unknown preset") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("stats on a gaussian synthetic input reports near-zero kurtosis") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_stats");

    // Fabricate a timeseries whose returns are iid standard normal.
    fcm::SimOutput synth;
    synth.version = fcm::kVersion;
    synth.config.seed = 0;
    const auto rets = testsup::gaussian_series(120000, 661);
    double price = 0.0;
    for (std::size_t i = 0; i < rets.size(); ++i) {
        price += rets[i];
        synth.step.push_back(static_cast<long>(i + 1));
        synth.price.push_back(price);
        synth.ret.push_back(rets[i]);
        synth.n_c.push_back(0);
        synth.n_f.push_back(1);
        synth.n.push_back(1);
        synth.rolling_variance.push_back(std::nan(""));
    }
    fcm::write_timeseries(dir / "synth.csv", synth);

    const auto res = run_cmd(bin + " stats --input " + q(dir / "synth.csv") +
                             " --out " + q(dir / "rep") + " --max-lag 50");
    REQUIRE(res.exit_code == 0);
    REQUIRE(fs::exists(dir / "rep/stats_summary.csv"));
    REQUIRE(fs::exists(dir / "rep/acf_returns.csv"));
    REQUIRE(fs::exists(dir / "rep/acf_volatility.csv"));
    REQUIRE(fs::exists(dir / "rep/hill.csv"));
    REQUIRE(fs::exists(dir / "rep/cond_var.csv"));
    REQUIRE(fs::exists(dir / "rep/manifest.json"));

    std::ifstream in(dir / "rep/stats_summary.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    const auto last_comma = row.rfind(',');
    const double kurt = std::stod(row.substr(last_comma + 1));
    CHECK(std::abs(kurt) < 0.1);
    fs::remove_all(dir);
}

TEST_CASE("degenerate one-point sweep equals simulate") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_sweep");
    write_file(dir / "base.ini", kSmallConfig);
    write_file(dir / "sweep.ini", R"([sweep]
mode = grid
base = base.ini
seed = 909

[vary]
b = 1
)");
    const auto res = run_cmd(bin + " sweep --spec " + q(dir / "sweep.ini") + " --out " +
                             q(dir / "sw") + " --max-parallel 2");
    REQUIRE(res.exit_code == 0);
    REQUIRE(fs::exists(dir / "sw/index.csv"));
    REQUIRE(fs::exists(dir / "sw/run_0000/timeseries.csv"));

    const std::uint64_t run_seed = fcm::Rng::derive_seed(909, 0);
    const auto res2 = run_cmd(bin + " simulate --config " + q(dir / "base.ini") +
                              " --seed " + std::to_string(run_seed) + " --out " +
                              q(dir / "one"));
    REQUIRE(res2.exit_code == 0);
    CHECK(fcm::sha256_file(dir / "sw/run_0000/timeseries.csv") ==
          fcm::sha256_file(dir / "one/timeseries.csv"));
    fs::remove_all(dir);
}

TEST_CASE("grid sweep enumerates the cartesian product") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_grid");
    write_file(dir / "base.ini", kSmallConfig);
    write_file(dir / "sweep.ini", R"([sweep]
mode = grid
base = base.ini
seed = 1

[vary]
b = 0.5 1.0
gamma = 0.01 0.02 0.05
)");
    const auto res = run_cmd(bin + " sweep --spec " + q(dir / "sweep.ini") + " --out " +
                             q(dir / "sw") + " --max-parallel 4");
    REQUIRE(res.exit_code == 0);
    int runs = 0;
    for (const auto& e : fs::directory_iterator(dir / "sw")) {
        runs += e.is_directory() ? 1 : 0;
    }
    CHECK(runs == 6);
    // index has header + 6 rows
    std::ifstream in(dir / "sw/index.csv");
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 7);
    fs::remove_all(dir);
}

TEST_CASE("random sweep draws within ranges") {
    const auto bin = testsup::fcmsim_bin();
    const auto dir = testsup::make_temp_dir("cli_rand");
    write_file(dir / "base.ini", kSmallConfig);
    write_file(dir / "sweep.ini", R"([sweep]
mode = random
base = base.ini
seed = 5
samples = 8

[vary]
gamma = 0.01 0.09
)");
    const auto res = run_cmd(bin + " sweep --spec " + q(dir / "sweep.ini") + " --out " +
                             q(dir / "sw"));
    REQUIRE(res.exit_code == 0);
    int runs = 0;
    for (const auto& e : fs::directory_iterator(dir / "sw")) {
        if (!e.is_directory()) continue;
        ++runs;
        const fcm::SimConfig c = fcm::parse_config(e.path() / "config.ini");
        CHECK(c.params.gamma >= 0.01);
        CHECK(c.params.gamma <= 0.09);
    }
    CHECK(runs == 8);
    fs::remove_all(dir);
}
