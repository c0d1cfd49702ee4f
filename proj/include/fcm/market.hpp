#pragma once
#include <cstddef>
#include <span>
#include <vector>

#include "fcm/params.hpp"

namespace fcm {

// Ring buffer of the last H prices plus a step counter. The most recent entry
// is the current price p(t); past(k) is p(t-k).
class MarketState {
public:
    explicit MarketState(std::size_t capacity);

    void push(double price);

    double price() const { return past(0); }
    double past(std::size_t k) const;

    std::size_t history_size() const { return size_; }
    std::size_t capacity() const { return buf_.size(); }
    long t() const { return t_; }

private:
    std::vector<double> buf_;
    std::size_t head_ = 0; // index of most recent entry
    std::size_t size_ = 0;
    long t_ = -1;
};

// Chartist count and moving average for one horizon.
struct HorizonMean {
    int m = 0;
    int count = 0;
    double mean = 0.0;
};

// Mean of the M prices strictly before the current one (k = 1..M).
double moving_average(const MarketState& state, int m);

// b * (p - p_M) / (M - 1). Trend-following: sign follows (p - p_M).
double chartist_drift(double price, double price_ma, double b, int m);

// gamma * (p_f - p). Restoring toward the fundamental price.
double fundamentalist_drift(double price, double p_f, double gamma);

// One price update:
//   p + sigma*xi + sum_M[ b*(p - p_M)/(M-1) * count_M/N ] + gamma*(p_f - p)*n_f
// horizon_means carries the chartist count and moving average per horizon;
// n_total is the total agent count N. Requires n_c + n_f = 1 within 1e-12.
double price_step(const MarketState& state, const ModelParams& params,
                  double n_c, double n_f, double xi,
                  std::span<const HorizonMean> horizon_means, int n_total);

} // namespace fcm
