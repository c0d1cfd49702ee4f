#include "fcm/market.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "fcm/errors.hpp"

namespace fcm {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

bool finite(double v) { return std::isfinite(v); }

} // namespace

void MPolicy::validate() const {
    require(!entries_.empty(), "m_policy: at least one horizon required");
    double total = 0.0;
    for (const auto& e : entries_) {
        require(e.m >= 2, "m_policy: horizon M must be >= 2");
        require(finite(e.weight) && e.weight > 0.0,
                "m_policy: weights must be positive");
        total += e.weight;
    }
    require(std::abs(total - 1.0) <= 1e-9, "m_policy: weights must sum to 1");
}

void ModelParams::validate() const {
    require(finite(b) && b >= 0.0, "b: must be finite and >= 0");
    require(finite(gamma) && gamma >= 0.0 && gamma < 1.0,
            "gamma: must be in [0, 1)");
    require(finite(sigma) && sigma >= 0.0, "sigma: must be finite and >= 0");
    require(finite(p_f), "p_f: must be finite");
    require(finite(B) && B > 0.0, "B: must be > 0");
    // r = 0 is admitted (K = 0): it is the degenerate no-spontaneous-switching
    // regime with absorbing all-C / all-F states.
    require(finite(r) && r >= 0.0, "r: must be finite and >= 0");
    require(finite(delta) && delta > -1.0 && delta < 1.0,
            "delta: must be in (-1, 1)");
    m_policy.validate();
}

MarketState::MarketState(std::size_t capacity) : buf_(capacity) {
    if (capacity == 0) throw ValidationError("MarketState: capacity must be >= 1");
}

void MarketState::push(double price) {
    head_ = (head_ + 1) % buf_.size();
    buf_[head_] = price;
    if (size_ < buf_.size()) ++size_;
    ++t_;
}

double MarketState::past(std::size_t k) const {
    if (k >= size_) {
        throw InsufficientHistoryError(
            "price " + std::to_string(k) + " steps back requested, history holds " +
            std::to_string(size_));
    }
    return buf_[(head_ + buf_.size() - k % buf_.size()) % buf_.size()];
}

double moving_average(const MarketState& state, int m) {
    if (m < 1) throw ValidationError("moving_average: M must be >= 1");
    const auto window = static_cast<std::size_t>(m);
    if (state.history_size() < window + 1) {
        throw InsufficientHistoryError(
            "moving average over " + std::to_string(m) + " past prices needs " +
            std::to_string(m + 1) + " stored, history holds " +
            std::to_string(state.history_size()));
    }
    double sum = 0.0;
    for (std::size_t k = 1; k <= window; ++k) sum += state.past(k);
    return sum / static_cast<double>(m);
}

double chartist_drift(double price, double price_ma, double b, int m) {
    if (m < 2) throw ValidationError("chartist_drift: M must be >= 2");
    return b * (price - price_ma) / static_cast<double>(m - 1);
}

double fundamentalist_drift(double price, double p_f, double gamma) {
    return gamma * (p_f - price);
}

double price_step(const MarketState& state, const ModelParams& params,
                  double n_c, double n_f, double xi,
                  std::span<const HorizonMean> horizon_means, int n_total) {
    if (std::abs(n_c + n_f - 1.0) > 1e-12) {
        throw ValidationError("price_step: n_c + n_f must equal 1");
    }
    if (n_total < 1 && !horizon_means.empty()) {
        throw ValidationError("price_step: N must be >= 1");
    }
    const double p = state.price();
    double next = p + params.sigma * xi + fundamentalist_drift(p, params.p_f, params.gamma) * n_f;
    for (const auto& hm : horizon_means) {
        if (hm.count == 0) continue;
        const double weight = static_cast<double>(hm.count) / static_cast<double>(n_total);
        next += chartist_drift(p, hm.mean, params.b, hm.m) * weight;
    }
    return next;
}

} // namespace fcm
