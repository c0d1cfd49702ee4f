#pragma once
// Shared test utilities: synthetic series with known properties, a one-sample
// Kolmogorov-Smirnov statistic, reference CDFs, and a tiny subprocess runner
// for CLI tests.
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fcm/engine.hpp"
#include "fcm/rng.hpp"

namespace testsup {

// Two-sided one-sample KS statistic of sample against cdf. Ties are handled
// by comparing the empirical CDF from both sides of each jump.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

// Regularized incomplete beta: CDF of Beta(a, b) at x.
double beta_cdf(double x, double a, double b);

// CDF of the beta-binomial law on {0..n} with symmetric parameter eps,
// evaluated at k (inclusive). Finite-N reference for the herding chain.
double beta_binomial_cdf(int k, int n, double eps);

// Synthetic generators, all driven by fcm::Rng for reproducibility.
std::vector<double> gaussian_series(std::size_t n, std::uint64_t seed);
// Pareto with scale 1: P(X > x) = x^-alpha for x >= 1.
std::vector<double> pareto_series(std::size_t n, double alpha, std::uint64_t seed);
// Student-t with nu degrees of freedom (ratio of normal and chi-square).
std::vector<double> student_t_series(std::size_t n, int nu, std::uint64_t seed);
// AR(1): x_{t+1} = a x_t + noise, unit innovations, burn-in discarded.
std::vector<double> ar1_series(std::size_t n, double a, std::uint64_t seed);
// Alternating variance regimes: std 1 for block steps, then std high_std.
std::vector<double> two_regime_series(std::size_t n, std::size_t block,
                                      double high_std, std::uint64_t seed);

// Chartist-fraction series of a finished run.
std::vector<double> frac_c_series(const fcm::SimOutput& out);

// Runs a command, captures combined stdout+stderr and the exit code.
struct CmdResult {
    int exit_code = -1;
    std::string output;
};
CmdResult run_cmd(const std::string& command);

// Path to the fcmsim binary (FCMSIM_BIN env var, set by ctest).
std::string fcmsim_bin();

// Fresh scratch directory under the system temp dir.
std::filesystem::path make_temp_dir(const std::string& tag);

} // namespace testsup
