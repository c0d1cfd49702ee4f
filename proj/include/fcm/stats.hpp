#pragma once
#include <cstddef>
#include <span>
#include <vector>

namespace fcm {

// First differences r(t) = p(t) - p(t-1); length len-1.
std::vector<double> returns(std::span<const double> prices);

struct SeriesStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;        // population variance (divisor n)
    double skewness = 0.0;
    double excess_kurtosis = 0.0; // m4/m2^2 - 3
};

SeriesStats series_stats(std::span<const double> series);

// m4/m2^2 - 3 with central moments; 0 for a Gaussian.
double excess_kurtosis(std::span<const double> series);

struct AcfReport {
    std::vector<int> lags;      // 0..max_lag
    std::vector<double> values; // autocorrelation or autocovariance per lag
    double noise_band = 0.0;    // +-1.96/sqrt(n)
    bool normalized = true;     // true: autocorrelation, false: autocovariance
};

// rho(k) = sum (x_t - xbar)(x_{t+k} - xbar) / sum (x_t - xbar)^2, k = 0..max_lag.
AcfReport autocorrelation(std::span<const double> series, int max_lag);

// Unnormalized variant, divisor n at every lag; lag 0 is the population variance.
AcfReport autocovariance(std::span<const double> series, int max_lag);

enum class VolatilityMode { Abs, Squared };

// |r| or r^2, box-smoothed over smoothing_window (output length n-w+1).
std::vector<double> volatility_series(std::span<const double> returns,
                                      VolatilityMode mode, int smoothing_window);

// Autocorrelation of |returns|; positive significant small-lag values
// indicate volatility clustering.
AcfReport volatility_clustering_report(std::span<const double> returns, int max_lag);

// Hill estimator of the tail index over the top k_fraction order statistics
// of |series|.
double hill_tail_index(std::span<const double> series, double k_fraction);

struct CondVarRow {
    double bin_low = 0.0;
    double bin_high = 0.0;
    std::size_t count = 0;
    double mean_next_abs = 0.0;
};

// Bins |r(t)| into n_bins quantile bins and reports the mean |r(t+1)| per
// bin. A monotone-increasing table evidences the multiplicative volatility
// mechanism.
std::vector<CondVarRow> conditional_variance_diagnostic(
    std::span<const double> returns, int n_bins);

// Smallest lag k >= 1 with report.values[k] < threshold; max_lag+1 if none.
int first_lag_below(const AcfReport& report, double threshold);

// Drops the initial fraction of a series (warm-up transient).
std::vector<double> drop_initial_fraction(std::span<const double> series,
                                          double fraction);

} // namespace fcm
