#include "fcm/selforg.hpp"

#include <cmath>

#include "fcm/errors.hpp"

namespace fcm {

void SelfOrgPolicy::validate() const {
    if (!(std::isfinite(theta_in) && theta_in > 0.0)) {
        throw ValidationError("theta_in: must be > 0");
    }
    if (!(std::isfinite(theta_out) && theta_out > 0.0)) {
        throw ValidationError("theta_out: must be > 0");
    }
    if (theta_out > theta_in) {
        throw ValidationError(
            "theta_out: must not exceed theta_in (hysteresis band)");
    }
    if (window_t < 2) throw ValidationError("window: must be >= 2");
    if (flow_rate < 1) throw ValidationError("flow_rate: must be >= 1");
    if (n_min < 1) throw ValidationError("n_min: must be >= 1");
    if (n_min >= n_max) throw ValidationError("n_min: must be < n_max");
}

double rolling_variance(const MarketState& state, int t_window) {
    if (t_window < 2) throw ValidationError("rolling_variance: T must be >= 2");
    const auto window = static_cast<std::size_t>(t_window);
    if (state.history_size() < window) {
        throw InsufficientHistoryError(
            "rolling variance over " + std::to_string(t_window) +
            " prices, history holds " + std::to_string(state.history_size()));
    }
    double mean = 0.0;
    for (std::size_t k = 0; k < window; ++k) mean += state.past(k);
    mean /= static_cast<double>(t_window);
    double ss = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
        const double d = state.past(k) - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(t_window - 1);
}

void population_flow_step(Population& pop, double sigma_t,
                          const SelfOrgPolicy& policy,
                          const ModelParams& params, Rng& rng) {
    if (sigma_t > policy.theta_in) {
        // Entrant class is drawn from the pre-entry composition.
        const double frac_c = pop.frac_c();
        for (int i = 0; i < policy.flow_rate && pop.size() < policy.n_max; ++i) {
            Agent a;
            switch (policy.entrant_strategy) {
            case EntrantStrategy::Fundamentalist:
                a.strategy = Strategy::Fundamentalist;
                break;
            case EntrantStrategy::Proportional:
                a.strategy = rng.bernoulli(frac_c) ? Strategy::Chartist
                                                   : Strategy::Fundamentalist;
                break;
            }
            a.horizon = params.m_policy.sample(rng);
            pop.add(a);
        }
    } else if (sigma_t < policy.theta_out) {
        for (int i = 0; i < policy.flow_rate && pop.size() > policy.n_min; ++i) {
            pop.remove_swap(rng.uniform_int(pop.size()));
        }
    }
}

} // namespace fcm
