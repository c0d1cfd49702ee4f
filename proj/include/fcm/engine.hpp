#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fcm/params.hpp"
#include "fcm/selforg.hpp"

namespace fcm {

inline constexpr const char* kVersion = "0.1.0";

enum class NPolicy { FixedN, SelfOrganizing };

struct SimConfig {
    ModelParams params;
    int n_initial = 500;
    NPolicy n_policy = NPolicy::FixedN;
    std::optional<SelfOrgPolicy> selforg; // required when self-organizing
    long steps = 100000;
    std::uint64_t seed = 1;
    int record_every = 1;
    long burn_in = 0;
    double init_chartist_fraction = 0.5; // initial N_c = round(frac * N)
    int variance_window = 0;             // record rolling variance at fixed N; 0 = off
    double price_floor = 0.0;            // clamp price at this epsilon; 0 = off

    void validate() const;
    bool operator==(const SimConfig&) const = default;
};

enum class RunStatus { Ok, Overflow, Invalid };

// Time-aligned record of one run. All sequences have equal length and
// n_c[i] + n_f[i] == n[i] at every record. rolling_variance is NaN where not
// computed.
struct SimOutput {
    SimConfig config;
    std::string version;
    RunStatus status = RunStatus::Ok;
    std::string message;

    std::vector<long> step;
    std::vector<double> price;
    std::vector<double> ret;
    std::vector<int> n_c;
    std::vector<int> n_f;
    std::vector<int> n;
    std::vector<double> rolling_variance;

    std::size_t rows() const { return step.size(); }
};

// Runs one simulation. Per step, in this order: (1) draw xi and update the
// price, (2) synchronous strategy update with agent-index-order draws,
// (3) when self-organizing, rolling variance then population flow. Steps
// s = 1..steps; step s is recorded when s > burn_in and
// (s - burn_in - 1) % record_every == 0. Identical (config, seed) produce
// identical output. Price overflow aborts with partial output flagged.
SimOutput run_simulation(const SimConfig& config);

// Runs configs concurrently on up to max_parallel threads. Results are
// positionally aligned with the input and independent of scheduling.
// Per-run failures are reported via RunStatus, never thrown.
std::vector<SimOutput> run_ensemble(std::span<const SimConfig> configs,
                                    int max_parallel);

// Reference experiment recipes. Names: fig1_dist, fig2_intermittency,
// fig3_sf, fig4_volatility, fig5_selforg.
std::vector<SimConfig> preset(const std::string& name);
std::vector<std::string> preset_names();

// Reference parameter set shared by the presets.
ModelParams reference_params();

// Equal-weight mixed horizon set used by the heterogeneous-horizon preset.
MPolicy mixed_horizons();

// Entry/exit policy used by the self-organizing presets.
SelfOrgPolicy reference_selforg();

} // namespace fcm
