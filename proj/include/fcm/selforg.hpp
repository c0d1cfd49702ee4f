#pragma once
#include "fcm/market.hpp"
#include "fcm/population.hpp"

namespace fcm {

enum class EntrantStrategy { Fundamentalist, Proportional };

// Threshold-driven entry/exit of agents, keyed on rolling price variance.
struct SelfOrgPolicy {
    double theta_in = 4.0;   // enter when sigma(t,T) > theta_in
    double theta_out = 1.0;  // exit when sigma(t,T) < theta_out; <= theta_in
    int window_t = 100;      // variance window T >= 2
    int flow_rate = 1;       // max agents entering/exiting per step
    int n_min = 1;
    int n_max = 10000;
    EntrantStrategy entrant_strategy = EntrantStrategy::Proportional;

    void validate() const;
    bool operator==(const SelfOrgPolicy&) const = default;
};

// Sample variance (divisor T-1) of the most recent T prices.
double rolling_variance(const MarketState& state, int t_window);

// If sigma_t > theta_in, adds up to flow_rate agents (class per
// entrant_strategy, horizon drawn from m_policy); if sigma_t < theta_out,
// removes up to flow_rate agents chosen uniformly at random. Population
// stays within [n_min, n_max].
void population_flow_step(Population& pop, double sigma_t,
                          const SelfOrgPolicy& policy,
                          const ModelParams& params, Rng& rng);

} // namespace fcm
