#include "fcm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fcm/errors.hpp"

namespace fcm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

std::vector<double> returns(std::span<const double> prices) {
    if (prices.size() < 2) {
        throw InsufficientDataError("returns: need at least 2 prices");
    }
    std::vector<double> r(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) r[i - 1] = prices[i] - prices[i - 1];
    return r;
}

SeriesStats series_stats(std::span<const double> series) {
    if (series.empty()) throw InsufficientDataError("series_stats: empty series");
    SeriesStats s;
    s.count = series.size();
    s.mean = mean_of(series);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : series) {
        const double d = x - s.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double n = static_cast<double>(s.count);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.variance = m2;
    s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : kNan;
    s.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : kNan;
    return s;
}

double excess_kurtosis(std::span<const double> series) {
    if (series.size() < 4) {
        throw InsufficientDataError("excess_kurtosis: need at least 4 values");
    }
    const SeriesStats s = series_stats(series);
    if (!(s.variance > 0.0)) {
        throw ZeroVarianceError("excess_kurtosis: series variance is zero");
    }
    return s.excess_kurtosis;
}

namespace {

// Shared lag-product accumulator. normalize: divide by sum of squares
// (autocorrelation); otherwise divide by n (autocovariance).
AcfReport acf_impl(std::span<const double> series, int max_lag, bool normalize) {
    if (max_lag < 0) throw ValidationError("max_lag must be >= 0");
    const std::size_t n = series.size();
    if (n <= static_cast<std::size_t>(max_lag) + 1) {
        throw InsufficientDataError("autocorrelation: series length " +
                                    std::to_string(n) + " too short for max_lag " +
                                    std::to_string(max_lag));
    }
    const double xbar = mean_of(series);
    double denom = 0.0;
    for (double x : series) denom += (x - xbar) * (x - xbar);
    if (normalize && denom == 0.0) {
        throw ZeroVarianceError("autocorrelation: series variance is zero");
    }
    AcfReport rep;
    rep.normalized = normalize;
    rep.noise_band = 1.96 / std::sqrt(static_cast<double>(n));
    rep.lags.resize(static_cast<std::size_t>(max_lag) + 1);
    rep.values.resize(static_cast<std::size_t>(max_lag) + 1);
    for (int k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t) {
            s += (series[t] - xbar) * (series[t + static_cast<std::size_t>(k)] - xbar);
        }
        rep.lags[static_cast<std::size_t>(k)] = k;
        rep.values[static_cast<std::size_t>(k)] =
            normalize ? s / denom : s / static_cast<double>(n);
    }
    return rep;
}

} // namespace

AcfReport autocorrelation(std::span<const double> series, int max_lag) {
    return acf_impl(series, max_lag, true);
}

AcfReport autocovariance(std::span<const double> series, int max_lag) {
    return acf_impl(series, max_lag, false);
}

std::vector<double> volatility_series(std::span<const double> returns,
                                      VolatilityMode mode, int smoothing_window) {
    if (returns.empty()) throw InsufficientDataError("volatility_series: empty returns");
    if (smoothing_window < 1) {
        throw ValidationError("volatility_series: smoothing_window must be >= 1");
    }
    const std::size_t w = static_cast<std::size_t>(smoothing_window);
    if (w > returns.size()) {
        throw InsufficientDataError(
            "volatility_series: smoothing_window exceeds series length");
    }
    std::vector<double> v(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) {
        v[i] = mode == VolatilityMode::Abs ? std::abs(returns[i])
                                           : returns[i] * returns[i];
    }
    if (w == 1) return v;
    std::vector<double> out(returns.size() - w + 1);
    double acc = 0.0;
    for (std::size_t i = 0; i < w; ++i) acc += v[i];
    out[0] = acc / static_cast<double>(w);
    for (std::size_t i = 1; i < out.size(); ++i) {
        acc += v[i + w - 1] - v[i - 1];
        out[i] = acc / static_cast<double>(w);
    }
    return out;
}

AcfReport volatility_clustering_report(std::span<const double> returns, int max_lag) {
    const std::vector<double> v =
        volatility_series(returns, VolatilityMode::Abs, 1);
    return autocorrelation(v, max_lag);
}

double hill_tail_index(std::span<const double> series, double k_fraction) {
    if (!(k_fraction > 0.0 && k_fraction < 1.0)) {
        throw ValidationError("hill_tail_index: k_fraction must be in (0, 1)");
    }
    const std::size_t n = series.size();
    const std::size_t k =
        static_cast<std::size_t>(std::floor(k_fraction * static_cast<double>(n)));
    if (k < 10 || k + 1 > n) {
        throw InsufficientTailError(
            "hill_tail_index: needs at least 10 tail order statistics, got " +
            std::to_string(k));
    }
    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(series[i]);
    // Top k order statistics plus the (k+1)-th as threshold.
    std::nth_element(mag.begin(), mag.begin() + static_cast<std::ptrdiff_t>(n - k - 1),
                     mag.end());
    const double x_threshold = mag[n - k - 1];
    if (!(x_threshold > 0.0)) {
        throw InsufficientTailError(
            "hill_tail_index: tail threshold is not positive");
    }
    double s = 0.0;
    for (std::size_t i = n - k; i < n; ++i) s += std::log(mag[i] / x_threshold);
    if (!(s > 0.0)) {
        throw InsufficientTailError("hill_tail_index: degenerate tail (ties)");
    }
    return static_cast<double>(k) / s;
}

std::vector<CondVarRow> conditional_variance_diagnostic(
    std::span<const double> returns, int n_bins) {
    if (n_bins < 1) throw ValidationError("n_bins must be >= 1");
    if (returns.size() < 10 * static_cast<std::size_t>(n_bins)) {
        throw InsufficientDataError(
            "conditional_variance_diagnostic: need at least 10 samples per bin");
    }
    const std::size_t pairs = returns.size() - 1;
    std::vector<double> cur(pairs);
    for (std::size_t t = 0; t < pairs; ++t) cur[t] = std::abs(returns[t]);

    std::vector<double> sorted = cur;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) {
        throw ZeroVarianceError(
            "conditional_variance_diagnostic: |returns| are constant, bins degenerate");
    }
    // Quantile bin edges; interior edges at i/n_bins empirical quantiles.
    std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
    edges.front() = sorted.front();
    edges.back() = sorted.back();
    for (int i = 1; i < n_bins; ++i) {
        const std::size_t idx = static_cast<std::size_t>(
            std::floor(static_cast<double>(i) / n_bins * static_cast<double>(pairs)));
        edges[static_cast<std::size_t>(i)] = sorted[std::min(idx, pairs - 1)];
    }
    std::vector<CondVarRow> rows(static_cast<std::size_t>(n_bins));
    for (int i = 0; i < n_bins; ++i) {
        rows[static_cast<std::size_t>(i)].bin_low = edges[static_cast<std::size_t>(i)];
        rows[static_cast<std::size_t>(i)].bin_high =
            edges[static_cast<std::size_t>(i) + 1];
    }
    for (std::size_t t = 0; t < pairs; ++t) {
        // Upper edge exclusive except for the final bin.
        auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, cur[t]);
        const std::size_t bin = static_cast<std::size_t>(it - (edges.begin() + 1));
        rows[bin].count += 1;
        rows[bin].mean_next_abs += std::abs(returns[t + 1]);
    }
    for (auto& row : rows) {
        row.mean_next_abs = row.count ? row.mean_next_abs / static_cast<double>(row.count)
                                      : kNan;
    }
    return rows;
}

int first_lag_below(const AcfReport& report, double threshold) {
    for (std::size_t i = 1; i < report.values.size(); ++i) {
        if (report.values[i] < threshold) return report.lags[i];
    }
    return report.lags.empty() ? 1 : report.lags.back() + 1;
}

std::vector<double> drop_initial_fraction(std::span<const double> series,
                                          double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0)) {
        throw ValidationError("drop_initial_fraction: fraction must be in [0, 1)");
    }
    const std::size_t drop = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(series.size())));
    return std::vector<double>(series.begin() + static_cast<std::ptrdiff_t>(drop),
                               series.end());
}

} // namespace fcm
