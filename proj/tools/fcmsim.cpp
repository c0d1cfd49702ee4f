// fcmsim: command-line front end for the market simulator.
//
// Subcommands: simulate, selforg, preset, stats, sweep. Output directory
// defaults to $FCMSIM_OUT (falling back to "."), overridden by --out.
// Exit codes: 0 success, 1 usage, 2 config/validation, 3 runtime/numeric.
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fcm/config_io.hpp"
#include "fcm/engine.hpp"
#include "fcm/errors.hpp"
#include "fcm/stats.hpp"

namespace fs = std::filesystem;

namespace {

std::string now_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string default_out_dir() {
    const char* env = std::getenv("FCMSIM_OUT");
    return env && *env ? env : ".";
}

std::string status_str(fcm::RunStatus s) {
    switch (s) {
    case fcm::RunStatus::Ok: return "ok";
    case fcm::RunStatus::Overflow: return "overflow";
    case fcm::RunStatus::Invalid: return "invalid";
    }
    return "unknown";
}

// Writes one run directory: timeseries.csv, config.ini, then manifest.json.
void write_run_dir(const fs::path& dir, const fcm::SimOutput& out,
                   const std::string& started, const std::string& finished) {
    fs::create_directories(dir);
    const std::string config_text = fcm::write_config(out.config);
    fcm::write_timeseries(dir / "timeseries.csv", out);
    {
        std::ofstream f(dir / "config.ini", std::ios::binary);
        if (!f) throw fcm::RuntimeIoError("cannot write " + (dir / "config.ini").string());
        f << config_text;
    }
    fcm::RunManifest m;
    m.config_text = config_text;
    m.seed = out.config.seed;
    m.started_utc = started;
    m.finished_utc = finished;
    m.version = out.version;
    m.status = status_str(out.status);
    m.outputs.push_back({"timeseries.csv", fcm::sha256_file(dir / "timeseries.csv")});
    m.outputs.push_back({"config.ini", fcm::sha256_file(dir / "config.ini")});
    fcm::write_manifest(dir / "manifest.json", m);
}

struct SimulateArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int record_every = 0;
    long burn_in = -1;
};

int run_simulate(const SimulateArgs& args, bool force_selforg) {
    fcm::SimConfig config = fcm::parse_config(args.config_path);
    if (force_selforg) config.n_policy = fcm::NPolicy::SelfOrganizing;
    if (args.seed_set) config.seed = args.seed;
    if (args.record_every > 0) config.record_every = args.record_every;
    if (args.burn_in >= 0) config.burn_in = args.burn_in;
    config.validate();

    const std::string started = now_utc();
    const fcm::SimOutput out = fcm::run_simulation(config);
    write_run_dir(args.out_dir, out, started, now_utc());
    if (out.status != fcm::RunStatus::Ok) {
        std::cerr << "fcmsim: run aborted: " << out.message << "\n";
        return 3;
    }
    std::cout << "wrote " << (fs::path(args.out_dir) / "timeseries.csv").string()
              << " (" << out.rows() << " rows)\n";
    return 0;
}

int run_preset(const std::string& name, const std::string& out_dir, int max_parallel) {
    const std::vector<fcm::SimConfig> configs = fcm::preset(name);
    const std::string started = now_utc();
    const std::vector<fcm::SimOutput> outs =
        fcm::run_ensemble(configs, max_parallel);
    const std::string finished = now_utc();

    const fs::path base = fs::path(out_dir) / name;
    fs::create_directories(base);
    std::ostringstream index;
    index << "run,seed,n_initial,n_policy,steps,status,path\n";
    int worst = 0;
    for (std::size_t i = 0; i < outs.size(); ++i) {
        char run_name[16];
        std::snprintf(run_name, sizeof run_name, "run_%02zu", i);
        write_run_dir(base / run_name, outs[i], started, finished);
        index << i << ',' << outs[i].config.seed << ',' << outs[i].config.n_initial
              << ','
              << (outs[i].config.n_policy == fcm::NPolicy::SelfOrganizing ? "selforg"
                                                                          : "fixed")
              << ',' << outs[i].config.steps << ',' << status_str(outs[i].status)
              << ',' << run_name << '\n';
        if (outs[i].status == fcm::RunStatus::Overflow) worst = 3;
        if (outs[i].status == fcm::RunStatus::Invalid) worst = 2;
    }
    std::ofstream f(base / "index.csv", std::ios::binary);
    if (!f) throw fcm::RuntimeIoError("cannot write " + (base / "index.csv").string());
    f << index.str();
    std::cout << "wrote " << (base / "index.csv").string() << " (" << outs.size()
              << " runs)\n";
    return worst;
}

struct StatsArgs {
    std::string input;
    std::string out_dir;
    int max_lag = 100;
    std::string vol_mode = "abs";
    double hill_k = 0.05;
    double drop_initial = 0.1;
};

int run_stats(const StatsArgs& args) {
    const fcm::TimeseriesData data = fcm::read_timeseries(args.input);
    if (data.ret.size() < 2) {
        throw fcm::InsufficientDataError("stats: timeseries has too few rows");
    }
    const std::vector<double> rets =
        fcm::drop_initial_fraction(data.ret, args.drop_initial);
    const fcm::VolatilityMode mode = args.vol_mode == "squared"
                                         ? fcm::VolatilityMode::Squared
                                         : fcm::VolatilityMode::Abs;

    fs::create_directories(args.out_dir);
    const fs::path dir = args.out_dir;
    const std::string started = now_utc();

    auto write_file = [&](const fs::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw fcm::RuntimeIoError("cannot write " + p.string());
        f << text;
    };

    write_file(dir / "stats_summary.csv",
               fcm::format_series_stats(fcm::series_stats(rets)));
    write_file(dir / "acf_returns.csv",
               fcm::format_acf_report(fcm::autocorrelation(rets, args.max_lag)));
    const std::vector<double> vol = fcm::volatility_series(rets, mode, 1);
    write_file(dir / "acf_volatility.csv",
               fcm::format_acf_report(fcm::autocorrelation(vol, args.max_lag)));
    {
        std::ostringstream os;
        os << "k_fraction,tail_index\n";
        os << args.hill_k << ',';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", fcm::hill_tail_index(rets, args.hill_k));
        os << buf << '\n';
        write_file(dir / "hill.csv", os.str());
    }
    write_file(dir / "cond_var.csv",
               fcm::format_cond_var_table(
                   fcm::conditional_variance_diagnostic(rets, 10)));

    fcm::RunManifest m;
    m.config_text = "input = " + args.input + "\n";
    m.started_utc = started;
    m.finished_utc = now_utc();
    m.version = fcm::kVersion;
    m.status = "ok";
    for (const char* f : {"stats_summary.csv", "acf_returns.csv", "acf_volatility.csv",
                          "hill.csv", "cond_var.csv"}) {
        m.outputs.push_back({f, fcm::sha256_file(dir / f)});
    }
    fcm::write_manifest(dir / "manifest.json", m);
    std::cout << "wrote stats reports to " << dir.string() << "\n";
    return 0;
}

// Sweep spec: [sweep] mode = grid|random, base = <config path relative to the
// spec file>, seed = <master>, samples = <random count>; [vary] lists either
// explicit values (grid) or "low high" ranges (random) per parameter.
struct SweepSpec {
    std::string mode = "grid";
    fs::path base_config;
    std::uint64_t master_seed = 1;
    long samples = 0;
    std::vector<std::pair<std::string, std::vector<double>>> vary;
};

SweepSpec parse_sweep_spec(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fcm::RuntimeIoError("cannot open sweep spec: " + path.string());
    SweepSpec spec;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r\n");
            const auto b = s.find_last_not_of(" \t\r\n");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw fcm::ParseError("unterminated section", line_no);
            section = line.substr(1, line.size() - 2);
            if (section != "sweep" && section != "vary") {
                throw fcm::ParseError("unknown section [" + section + "]", line_no);
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw fcm::ParseError("expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section == "sweep") {
            if (key == "mode") {
                if (val != "grid" && val != "random") {
                    throw fcm::ParseError("mode must be grid or random", line_no);
                }
                spec.mode = val;
            } else if (key == "base") {
                spec.base_config = path.parent_path() / val;
            } else if (key == "seed") {
                spec.master_seed = std::strtoull(val.c_str(), nullptr, 10);
            } else if (key == "samples") {
                spec.samples = std::strtol(val.c_str(), nullptr, 10);
            } else {
                throw fcm::ParseError("unknown key '" + key + "' in [sweep]", line_no);
            }
        } else if (section == "vary") {
            std::vector<double> values;
            std::istringstream vs(val);
            double v;
            while (vs >> v) values.push_back(v);
            if (values.empty()) throw fcm::ParseError("no values for '" + key + "'", line_no);
            spec.vary.emplace_back(key, values);
        } else {
            throw fcm::ParseError("key outside any section", line_no);
        }
    }
    if (spec.base_config.empty()) {
        throw fcm::ParseError("sweep spec missing base config path", 0);
    }
    return spec;
}

void apply_param(fcm::SimConfig& config, const std::string& key, double value) {
    if (key == "b") config.params.b = value;
    else if (key == "gamma") config.params.gamma = value;
    else if (key == "sigma") config.params.sigma = value;
    else if (key == "p_f") config.params.p_f = value;
    else if (key == "B") config.params.B = value;
    else if (key == "r") config.params.r = value;
    else if (key == "delta") config.params.delta = value;
    else if (key == "n_initial") config.n_initial = static_cast<int>(value);
    else if (key == "steps") config.steps = static_cast<long>(value);
    else throw fcm::ValidationError("sweep cannot vary parameter '" + key + "'");
}

int run_sweep(const std::string& spec_path, const std::string& out_dir,
              int max_parallel) {
    const SweepSpec spec = parse_sweep_spec(spec_path);
    const fcm::SimConfig base = fcm::parse_config(spec.base_config);

    std::vector<std::vector<double>> assignments;
    if (spec.mode == "grid") {
        std::vector<double> current(spec.vary.size());
        std::vector<std::size_t> idx(spec.vary.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < spec.vary.size(); ++i) {
                current[i] = spec.vary[i].second[idx[i]];
            }
            assignments.push_back(current);
            bool done = spec.vary.empty();
            std::size_t i = spec.vary.size();
            while (!done) {
                if (i == 0) { done = true; break; }
                --i;
                if (++idx[i] < spec.vary[i].second.size()) break;
                idx[i] = 0;
            }
            if (done) break;
        }
    } else {
        if (spec.samples < 1) {
            throw fcm::ValidationError("random sweep needs samples >= 1");
        }
        fcm::Rng rng(spec.master_seed);
        for (long s = 0; s < spec.samples; ++s) {
            std::vector<double> current(spec.vary.size());
            for (std::size_t i = 0; i < spec.vary.size(); ++i) {
                const auto& range = spec.vary[i].second;
                if (range.size() != 2) {
                    throw fcm::ValidationError("random sweep ranges need exactly 2 values");
                }
                current[i] = range[0] + (range[1] - range[0]) * rng.uniform();
            }
            assignments.push_back(current);
        }
    }

    std::vector<fcm::SimConfig> configs;
    configs.reserve(assignments.size());
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        fcm::SimConfig c = base;
        for (std::size_t k = 0; k < spec.vary.size(); ++k) {
            apply_param(c, spec.vary[k].first, assignments[i][k]);
        }
        c.seed = fcm::Rng::derive_seed(spec.master_seed, i);
        c.validate();
        configs.push_back(c);
    }

    const std::string started = now_utc();
    const std::vector<fcm::SimOutput> outs = fcm::run_ensemble(configs, max_parallel);
    const std::string finished = now_utc();

    const fs::path base_dir = out_dir;
    fs::create_directories(base_dir);
    std::ostringstream index;
    index << "run,seed";
    for (const auto& [key, values] : spec.vary) index << ',' << key;
    index << ",status,return_variance,excess_kurtosis\n";
    int worst = 0;
    for (std::size_t i = 0; i < outs.size(); ++i) {
        char run_name[24];
        std::snprintf(run_name, sizeof run_name, "run_%04zu", i);
        write_run_dir(base_dir / run_name, outs[i], started, finished);
        index << i << ',' << outs[i].config.seed;
        for (std::size_t k = 0; k < spec.vary.size(); ++k) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", assignments[i][k]);
            index << ',' << buf;
        }
        index << ',' << status_str(outs[i].status);
        if (outs[i].status == fcm::RunStatus::Ok && outs[i].ret.size() >= 4) {
            const fcm::SeriesStats s = fcm::series_stats(outs[i].ret);
            char buf[80];
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g", s.variance,
                          s.excess_kurtosis);
            index << buf;
        } else {
            index << ",,";
        }
        index << '\n';
        if (outs[i].status == fcm::RunStatus::Overflow) worst = 3;
        if (outs[i].status == fcm::RunStatus::Invalid) worst = 2;
    }
    std::ofstream f(base_dir / "index.csv", std::ios::binary);
    if (!f) throw fcm::RuntimeIoError("cannot write " + (base_dir / "index.csv").string());
    f << index.str();
    std::cout << "wrote " << (base_dir / "index.csv").string() << " ("
              << outs.size() << " runs)\n";
    return worst;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fundamentalist/chartist market model simulator"};
    app.require_subcommand(1);

    SimulateArgs sim_args;
    sim_args.out_dir = default_out_dir();

    auto add_sim_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", sim_args.config_path, "config file (ini)")
            ->required();
        cmd->add_option("--out", sim_args.out_dir, "output directory");
        cmd->add_option("--seed", sim_args.seed, "override config seed")
            ->each([&](const std::string&) { sim_args.seed_set = true; });
        cmd->add_option("--record-every", sim_args.record_every,
                        "override recording stride");
        cmd->add_option("--burn-in", sim_args.burn_in, "override burn-in steps");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "run one simulation");
    add_sim_options(simulate);
    CLI::App* selforg =
        app.add_subcommand("selforg", "run one self-organizing simulation");
    add_sim_options(selforg);

    CLI::App* preset_cmd = app.add_subcommand("preset", "run a reference experiment");
    std::string preset_name;
    std::string preset_out = default_out_dir();
    int preset_parallel = 1;
    preset_cmd->add_option("name", preset_name, "preset name")->required();
    preset_cmd->add_option("--out", preset_out, "output directory");
    preset_cmd->add_option("--max-parallel", preset_parallel, "worker threads");

    CLI::App* stats_cmd = app.add_subcommand("stats", "stylized-facts reports");
    StatsArgs stats_args;
    stats_args.out_dir = default_out_dir();
    stats_cmd->add_option("--input", stats_args.input, "timeseries.csv path")
        ->required();
    stats_cmd->add_option("--out", stats_args.out_dir, "output directory");
    stats_cmd->add_option("--max-lag", stats_args.max_lag, "autocorrelation lags");
    stats_cmd->add_option("--volatility", stats_args.vol_mode, "abs or squared")
        ->check(CLI::IsMember({"abs", "squared"}));
    stats_cmd->add_option("--hill-k", stats_args.hill_k, "tail fraction for Hill");
    stats_cmd->add_option("--drop-initial", stats_args.drop_initial,
                          "initial fraction dropped before analysis");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep");
    std::string sweep_spec;
    std::string sweep_out = default_out_dir();
    int sweep_parallel = 1;
    sweep_cmd->add_option("--spec", sweep_spec, "sweep spec file")->required();
    sweep_cmd->add_option("--out", sweep_out, "output directory");
    sweep_cmd->add_option("--max-parallel", sweep_parallel, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim_args, false);
        if (selforg->parsed()) return run_simulate(sim_args, true);
        if (preset_cmd->parsed()) return run_preset(preset_name, preset_out, preset_parallel);
        if (stats_cmd->parsed()) return run_stats(stats_args);
        if (sweep_cmd->parsed()) return run_sweep(sweep_spec, sweep_out, sweep_parallel);
    } catch (const fcm::ValidationError& e) {
        std::cerr << "fcmsim: " << e.what() << "\n";
        return 2;
    } catch (const fcm::ParseError& e) {
        std::cerr << "fcmsim: " << e.what() << "\n";
        return 2;
    } catch (const fcm::UnknownPresetError& e) {
        std::cerr << "fcmsim: " << e.what() << "\n";
        return 2;
    } catch (const fcm::InsufficientDataError& e) {
        std::cerr << "fcmsim: " << e.what() << "\n";
        return 2;
    } catch (const fcm::ZeroVarianceError& e) {
        std::cerr << "fcmsim: " << e.what() << "\n";
        return 2;
    } catch (const fcm::InsufficientTailError& e) {
        std::cerr << "fcmsim: " << e.what() << "\n";
        return 2;
    } catch (const fcm::InsufficientHistoryError& e) {
        std::cerr << "fcmsim: " << e.what() << "\n";
        return 2;
    } catch (const fcm::Error& e) {
        std::cerr << "fcmsim: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "fcmsim: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
