#include "fcm/switching.hpp"

#include <algorithm>
#include <cmath>

#include "fcm/errors.hpp"

namespace fcm {

namespace {

double clamp_prob(double v) { return std::min(1.0, std::max(0.0, v)); }

double exp_capped(double arg) { return std::exp(std::min(arg, kExpArgCap)); }

} // namespace

double rate_c_to_f(int n_f, int n_total, double price, const ModelParams& params) {
    if (n_total < 1) throw ValidationError("rate_c_to_f: N must be >= 1");
    const double k = params.r / static_cast<double>(n_total);
    const double frac_f = static_cast<double>(n_f) / static_cast<double>(n_total);
    double rate = params.B * (1.0 + params.delta) * (k + frac_f);
    if (params.exp_coupling) {
        rate *= exp_capped(params.gamma * std::abs(params.p_f - price));
    }
    return clamp_prob(rate);
}

double rate_f_to_c(int n_c, int n_total, double price, double price_ma, int m,
                   const ModelParams& params) {
    if (n_total < 1) throw ValidationError("rate_f_to_c: N must be >= 1");
    if (m < 2) throw ValidationError("rate_f_to_c: M must be >= 2");
    const double k = params.r / static_cast<double>(n_total);
    const double frac_c = static_cast<double>(n_c) / static_cast<double>(n_total);
    double rate = params.B * (1.0 - params.delta) * (k + frac_c);
    if (params.exp_coupling) {
        rate *= exp_capped(params.b * std::abs(price_ma - price) /
                           static_cast<double>(m - 1));
    }
    return clamp_prob(rate);
}

void update_strategies(Population& pop, double price,
                       std::span<const HorizonMean> horizon_means,
                       const ModelParams& params, Rng& rng) {
    const int n = pop.size();
    if (n == 0) return;

    // All rates are fixed from the pre-update counts (synchronous update).
    const double p_cf = rate_c_to_f(pop.n_f(), n, price, params);
    std::vector<std::pair<int, double>> p_fc_by_m;
    p_fc_by_m.reserve(horizon_means.size());
    for (const auto& hm : horizon_means) {
        p_fc_by_m.emplace_back(
            hm.m, rate_f_to_c(pop.n_c(), n, price, hm.mean, hm.m, params));
    }
    auto p_fc_for = [&](int m) -> double {
        for (const auto& [hm, rate] : p_fc_by_m) {
            if (hm == m) return rate;
        }
        throw ValidationError("update_strategies: no horizon mean for M=" +
                              std::to_string(m));
    };

    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const Agent& a = pop.agent(i);
        if (a.strategy == Strategy::Chartist) {
            if (u < p_cf) pop.set_strategy(i, Strategy::Fundamentalist);
        } else {
            if (u < p_fc_for(a.horizon)) pop.set_strategy(i, Strategy::Chartist);
        }
    }
}

double equilibrium_density_symmetric(double x, double eps) {
    if (!(x > 0.0 && x < 1.0)) {
        throw ValidationError("equilibrium_density_symmetric: x must be in (0, 1)");
    }
    if (!(eps > 0.0)) {
        throw ValidationError("equilibrium_density_symmetric: eps must be > 0");
    }
    const double log_beta = 2.0 * std::lgamma(eps) - std::lgamma(2.0 * eps);
    return std::exp((eps - 1.0) * (std::log(x) + std::log1p(-x)) - log_beta);
}

double equilibrium_density_asymmetric(double x, double r, double delta,
                                      double nu, int n_agents) {
    if (!(x > 0.0 && x < 1.0)) {
        throw ValidationError("equilibrium_density_asymmetric: x must be in (0, 1)");
    }
    return std::pow(x, r * (1.0 - delta) - 1.0) *
           std::pow(1.0 - x, r * (1.0 + delta) - 1.0) *
           std::exp(-2.0 * delta * nu * static_cast<double>(n_agents));
}

ResidenceTimes residence_times(std::span<const double> x_series,
                               double threshold_low, double threshold_high) {
    if (!(threshold_low > 0.0 && threshold_low < threshold_high &&
          threshold_high < 1.0)) {
        throw ValidationError(
            "residence_times: thresholds must satisfy 0 < low < high < 1");
    }
    ResidenceTimes out;
    enum class State { None, F, C };
    State state = State::None;
    long start = 0;
    for (long i = 0; i < static_cast<long>(x_series.size()); ++i) {
        const double x = x_series[static_cast<std::size_t>(i)];
        switch (state) {
        case State::None:
            if (x < threshold_low) { state = State::F; start = i; }
            else if (x > threshold_high) { state = State::C; start = i; }
            break;
        case State::F:
            if (x > threshold_high) {
                out.fundamentalist.push_back(i - start);
                state = State::C;
                start = i;
            }
            break;
        case State::C:
            if (x < threshold_low) {
                out.chartist.push_back(i - start);
                state = State::F;
                start = i;
            }
            break;
        }
    }
    const long n = static_cast<long>(x_series.size());
    if (state == State::F) out.fundamentalist.push_back(n - start);
    if (state == State::C) out.chartist.push_back(n - start);
    return out;
}

} // namespace fcm
