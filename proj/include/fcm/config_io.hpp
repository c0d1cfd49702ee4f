#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "fcm/engine.hpp"
#include "fcm/stats.hpp"

namespace fcm {

// Flat key-value config with [model], [run] and [selforg] sections.
// Unknown sections or keys are rejected with the offending line number.
SimConfig parse_config(const std::filesystem::path& path);
SimConfig parse_config_text(const std::string& text);
std::string write_config(const SimConfig& config);

// Delimited time series, one row per recorded step. Header:
// step,price,return,n_c,n_f,n,rolling_variance. Doubles are printed with
// %.17g (lossless round-trip); rolling_variance is empty where not computed.
// Leading '#' lines carry the code version and seed.
std::string format_timeseries(const SimOutput& out);
void write_timeseries(const std::filesystem::path& path, const SimOutput& out);

struct TimeseriesData {
    std::vector<long> step;
    std::vector<double> price;
    std::vector<double> ret;
    std::vector<int> n_c;
    std::vector<int> n_f;
    std::vector<int> n;
    std::vector<double> rolling_variance; // NaN where the file field is empty
};
TimeseriesData read_timeseries(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Manifest naming every artifact of a run with its checksum. Written after
// all listed files; its presence signals a complete run directory.
struct ManifestEntry {
    std::string path; // relative to the manifest's directory
    std::string sha256;
};
struct RunManifest {
    std::string config_text;
    std::uint64_t seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::string version;
    std::string status;
    std::vector<ManifestEntry> outputs;
};
void write_manifest(const std::filesystem::path& path, const RunManifest& m);

// Stats report serialization used by the stats subcommand.
std::string format_series_stats(const SeriesStats& s);
std::string format_acf_report(const AcfReport& r);
std::string format_cond_var_table(const std::vector<CondVarRow>& rows);

} // namespace fcm
