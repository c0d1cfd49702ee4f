#include "fcm/config_io.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fcm/errors.hpp"

namespace fcm {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& v, int line) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE) {
        throw ParseError("not a number: '" + v + "'", line);
    }
    return x;
}

long parse_long(const std::string& v, int line) {
    errno = 0;
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE) {
        throw ParseError("not an integer: '" + v + "'", line);
    }
    return x;
}

int parse_int(const std::string& v, int line) {
    const long x = parse_long(v, line);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ParseError("integer out of range: '" + v + "'", line);
    }
    return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& v, int line) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE ||
        v.find('-') != std::string::npos) {
        throw ParseError("not an unsigned integer: '" + v + "'", line);
    }
    return x;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ParseError("expected true or false, got '" + v + "'", line);
}

// "10" or "m:w m:w ..." with weights summing to 1.
MPolicy parse_horizons(const std::string& v, int line) {
    if (v.find(':') == std::string::npos) {
        return MPolicy::single(parse_int(v, line));
    }
    std::vector<HorizonWeight> entries;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) {
        const std::size_t colon = tok.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) {
            throw ParseError("bad horizon entry '" + tok + "', expected M:weight",
                             line);
        }
        HorizonWeight hw;
        hw.m = parse_int(tok.substr(0, colon), line);
        hw.weight = parse_double(tok.substr(colon + 1), line);
        entries.push_back(hw);
    }
    if (entries.empty()) throw ParseError("empty horizons value", line);
    return MPolicy::weighted(std::move(entries));
}

std::string format_horizons(const MPolicy& policy) {
    if (policy.is_single()) return std::to_string(policy.entries().front().m);
    std::string out;
    for (const auto& e : policy.entries()) {
        if (!out.empty()) out += ' ';
        out += std::to_string(e.m) + ":" + g17(e.weight);
    }
    return out;
}

} // namespace

SimConfig parse_config_text(const std::string& text) {
    SimConfig config;
    SelfOrgPolicy selforg;
    bool saw_selforg = false;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::size_t comment = raw.find_first_of("#;");
        std::string line = trim(comment == std::string::npos ? raw
                                                             : raw.substr(0, comment));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            section = line.substr(1, line.size() - 2);
            if (section != "model" && section != "run" && section != "selforg") {
                throw ParseError("unknown section [" + section + "]", line_no);
            }
            if (section == "selforg") saw_selforg = true;
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected key = value, got '" + line + "'", line_no);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        if (val.empty()) throw ParseError("empty value for key '" + key + "'", line_no);
        if (section.empty()) {
            throw ParseError("key '" + key + "' outside any section", line_no);
        }

        if (section == "model") {
            if (key == "b") config.params.b = parse_double(val, line_no);
            else if (key == "gamma") config.params.gamma = parse_double(val, line_no);
            else if (key == "sigma") config.params.sigma = parse_double(val, line_no);
            else if (key == "p_f") config.params.p_f = parse_double(val, line_no);
            else if (key == "B") config.params.B = parse_double(val, line_no);
            else if (key == "r") config.params.r = parse_double(val, line_no);
            else if (key == "delta") config.params.delta = parse_double(val, line_no);
            else if (key == "horizons") config.params.m_policy = parse_horizons(val, line_no);
            else if (key == "exp_coupling") config.params.exp_coupling = parse_bool(val, line_no);
            else throw ParseError("unknown key '" + key + "' in [model]", line_no);
        } else if (section == "run") {
            if (key == "n_initial") config.n_initial = parse_int(val, line_no);
            else if (key == "n_policy") {
                if (val == "fixed") config.n_policy = NPolicy::FixedN;
                else if (val == "selforg") config.n_policy = NPolicy::SelfOrganizing;
                else throw ParseError("n_policy must be fixed or selforg", line_no);
            }
            else if (key == "steps") config.steps = parse_long(val, line_no);
            else if (key == "seed") config.seed = parse_u64(val, line_no);
            else if (key == "record_every") config.record_every = parse_int(val, line_no);
            else if (key == "burn_in") config.burn_in = parse_long(val, line_no);
            else if (key == "init_chartist_fraction")
                config.init_chartist_fraction = parse_double(val, line_no);
            else if (key == "variance_window") config.variance_window = parse_int(val, line_no);
            else if (key == "price_floor") config.price_floor = parse_double(val, line_no);
            else throw ParseError("unknown key '" + key + "' in [run]", line_no);
        } else {
            if (key == "theta_in") selforg.theta_in = parse_double(val, line_no);
            else if (key == "theta_out") selforg.theta_out = parse_double(val, line_no);
            else if (key == "window") selforg.window_t = parse_int(val, line_no);
            else if (key == "flow_rate") selforg.flow_rate = parse_int(val, line_no);
            else if (key == "n_min") selforg.n_min = parse_int(val, line_no);
            else if (key == "n_max") selforg.n_max = parse_int(val, line_no);
            else if (key == "entrant") {
                if (val == "proportional") selforg.entrant_strategy = EntrantStrategy::Proportional;
                else if (val == "fundamentalist") selforg.entrant_strategy = EntrantStrategy::Fundamentalist;
                else throw ParseError("entrant must be proportional or fundamentalist", line_no);
            }
            else throw ParseError("unknown key '" + key + "' in [selforg]", line_no);
        }
    }
    if (saw_selforg) config.selforg = selforg;
    config.validate();
    return config;
}

SimConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeIoError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string write_config(const SimConfig& config) {
    std::ostringstream out;
    const ModelParams& p = config.params;
    out << "[model]\n";
    out << "b = " << g17(p.b) << "\n";
    out << "gamma = " << g17(p.gamma) << "\n";
    out << "sigma = " << g17(p.sigma) << "\n";
    out << "p_f = " << g17(p.p_f) << "\n";
    out << "B = " << g17(p.B) << "\n";
    out << "r = " << g17(p.r) << "\n";
    out << "delta = " << g17(p.delta) << "\n";
    out << "horizons = " << format_horizons(p.m_policy) << "\n";
    out << "exp_coupling = " << (p.exp_coupling ? "true" : "false") << "\n";
    out << "\n[run]\n";
    out << "n_initial = " << config.n_initial << "\n";
    out << "n_policy = "
        << (config.n_policy == NPolicy::SelfOrganizing ? "selforg" : "fixed") << "\n";
    out << "steps = " << config.steps << "\n";
    out << "seed = " << config.seed << "\n";
    out << "record_every = " << config.record_every << "\n";
    out << "burn_in = " << config.burn_in << "\n";
    out << "init_chartist_fraction = " << g17(config.init_chartist_fraction) << "\n";
    out << "variance_window = " << config.variance_window << "\n";
    out << "price_floor = " << g17(config.price_floor) << "\n";
    if (config.selforg) {
        const SelfOrgPolicy& s = *config.selforg;
        out << "\n[selforg]\n";
        out << "theta_in = " << g17(s.theta_in) << "\n";
        out << "theta_out = " << g17(s.theta_out) << "\n";
        out << "window = " << s.window_t << "\n";
        out << "flow_rate = " << s.flow_rate << "\n";
        out << "n_min = " << s.n_min << "\n";
        out << "n_max = " << s.n_max << "\n";
        out << "entrant = "
            << (s.entrant_strategy == EntrantStrategy::Proportional ? "proportional"
                                                                    : "fundamentalist")
            << "\n";
    }
    return out.str();
}

std::string format_timeseries(const SimOutput& out) {
    std::ostringstream os;
    os << "# fcm " << out.version << "\n";
    os << "# seed " << out.config.seed << "\n";
    os << "# status "
       << (out.status == RunStatus::Ok ? "ok"
           : out.status == RunStatus::Overflow ? "overflow" : "invalid")
       << "\n";
    if (!out.message.empty()) os << "# message " << out.message << "\n";
    os << "step,price,return,n_c,n_f,n,rolling_variance\n";
    for (std::size_t i = 0; i < out.rows(); ++i) {
        os << out.step[i] << ',' << g17(out.price[i]) << ',' << g17(out.ret[i]) << ','
           << out.n_c[i] << ',' << out.n_f[i] << ',' << out.n[i] << ',';
        if (std::isfinite(out.rolling_variance[i])) os << g17(out.rolling_variance[i]);
        os << '\n';
    }
    return os.str();
}

void write_timeseries(const std::filesystem::path& path, const SimOutput& out) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RuntimeIoError("cannot open for writing: " + path.string());
    f << format_timeseries(out);
    if (!f) throw RuntimeIoError("write failed: " + path.string());
}

TimeseriesData read_timeseries(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeIoError("cannot open timeseries file: " + path.string());
    TimeseriesData d;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!saw_header) {
            if (line != "step,price,return,n_c,n_f,n,rolling_variance") {
                throw ParseError("unexpected timeseries header '" + line + "'", line_no);
            }
            saw_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 7) {
            throw ParseError("expected 7 fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        d.step.push_back(parse_long(fields[0], line_no));
        d.price.push_back(parse_double(fields[1], line_no));
        d.ret.push_back(parse_double(fields[2], line_no));
        d.n_c.push_back(parse_int(fields[3], line_no));
        d.n_f.push_back(parse_int(fields[4], line_no));
        d.n.push_back(parse_int(fields[5], line_no));
        d.rolling_variance.push_back(
            fields[6].empty() ? std::numeric_limits<double>::quiet_NaN()
                              : parse_double(fields[6], line_no));
    }
    if (!saw_header) throw ParseError("missing timeseries header", line_no);
    return d;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw RuntimeIoError("sha256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeIoError("cannot open for checksum: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    nlohmann::json j;
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["status"] = m.status;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    j["config"] = m.config_text;
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& e : m.outputs) {
        outputs.push_back({{"path", e.path}, {"sha256", e.sha256}});
    }
    j["outputs"] = outputs;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RuntimeIoError("cannot open for writing: " + path.string());
    f << j.dump(2) << "\n";
    if (!f) throw RuntimeIoError("write failed: " + path.string());
}

std::string format_series_stats(const SeriesStats& s) {
    std::ostringstream os;
    os << "count,mean,variance,skewness,excess_kurtosis\n";
    os << s.count << ',' << g17(s.mean) << ',' << g17(s.variance) << ','
       << g17(s.skewness) << ',' << g17(s.excess_kurtosis) << '\n';
    return os.str();
}

std::string format_acf_report(const AcfReport& r) {
    std::ostringstream os;
    os << "# noise_band " << g17(r.noise_band) << "\n";
    os << "# normalized " << (r.normalized ? "true" : "false") << "\n";
    os << "lag,value\n";
    for (std::size_t i = 0; i < r.lags.size(); ++i) {
        os << r.lags[i] << ',' << g17(r.values[i]) << '\n';
    }
    return os.str();
}

std::string format_cond_var_table(const std::vector<CondVarRow>& rows) {
    std::ostringstream os;
    os << "bin_low,bin_high,count,mean_next_abs\n";
    for (const auto& row : rows) {
        os << g17(row.bin_low) << ',' << g17(row.bin_high) << ',' << row.count << ','
           << g17(row.mean_next_abs) << '\n';
    }
    return os.str();
}

} // namespace fcm
