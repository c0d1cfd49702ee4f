#include "support/support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace testsup {

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double beta_cdf(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return boost::math::ibeta(a, b, x);
}

double beta_binomial_cdf(int k, int n, double eps) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    // pmf(j) = C(n, j) * B(j + eps, n - j + eps) / B(eps, eps)
    auto log_beta = [](double a, double b) {
        return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    };
    const double log_b0 = log_beta(eps, eps);
    double cum = 0.0;
    for (int j = 0; j <= k; ++j) {
        const double log_choose = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                                  std::lgamma(n - j + 1.0);
        cum += std::exp(log_choose + log_beta(j + eps, n - j + eps) - log_b0);
    }
    return std::min(1.0, cum);
}

std::vector<double> gaussian_series(std::size_t n, std::uint64_t seed) {
    fcm::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    return v;
}

std::vector<double> pareto_series(std::size_t n, double alpha, std::uint64_t seed) {
    fcm::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        double u = rng.uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        x = std::pow(u, -1.0 / alpha); // inverse CDF of P(X > x) = x^-alpha
    }
    return v;
}

std::vector<double> student_t_series(std::size_t n, int nu, std::uint64_t seed) {
    fcm::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        const double z = rng.normal();
        double chi2 = 0.0;
        for (int i = 0; i < nu; ++i) {
            const double g = rng.normal();
            chi2 += g * g;
        }
        x = z / std::sqrt(chi2 / static_cast<double>(nu));
    }
    return v;
}

std::vector<double> ar1_series(std::size_t n, double a, std::uint64_t seed) {
    fcm::Rng rng(seed);
    const std::size_t burn = 1000;
    double x = 0.0;
    std::vector<double> v;
    v.reserve(n);
    for (std::size_t t = 0; t < n + burn; ++t) {
        x = a * x + rng.normal();
        if (t >= burn) v.push_back(x);
    }
    return v;
}

std::vector<double> two_regime_series(std::size_t n, std::size_t block,
                                      double high_std, std::uint64_t seed) {
    fcm::Rng rng(seed);
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
        const bool high = (t / block) % 2 == 1;
        v[t] = rng.normal() * (high ? high_std : 1.0);
    }
    return v;
}

std::vector<double> frac_c_series(const fcm::SimOutput& out) {
    std::vector<double> x(out.rows());
    for (std::size_t i = 0; i < out.rows(); ++i) {
        x[i] = static_cast<double>(out.n_c[i]) / static_cast<double>(out.n[i]);
    }
    return x;
}

CmdResult run_cmd(const std::string& command) {
    CmdResult res;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + command);
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) {
        res.output.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string fcmsim_bin() {
    const char* env = std::getenv("FCMSIM_BIN");
    if (!env || !*env) throw std::runtime_error("FCMSIM_BIN not set");
    return env;
}

std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::uint64_t counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("fcm_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testsup
