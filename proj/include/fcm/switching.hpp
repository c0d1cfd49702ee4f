#pragma once
#include <span>
#include <vector>

#include "fcm/market.hpp"
#include "fcm/params.hpp"
#include "fcm/population.hpp"

namespace fcm {

// Per-step switching probabilities, clamped to [0, 1]. The exponential
// price-coupling argument is capped at 50 before exponentiation.
inline constexpr double kExpArgCap = 50.0;

// Chartist -> fundamentalist: min(1, B*(1+delta)*(K + N_f/N) * E),
// E = exp(gamma*|p_f - p|) when exp_coupling is on, else 1. K = r/N.
double rate_c_to_f(int n_f, int n_total, double price, const ModelParams& params);

// Fundamentalist -> chartist: min(1, B*(1-delta)*(K + N_c/N) * E),
// E = exp(b*|p_M - p|/(M-1)) when exp_coupling is on, else 1.
double rate_f_to_c(int n_c, int n_total, double price, double price_ma, int m,
                   const ModelParams& params);

// Synchronous strategy update: all rates are evaluated from the pre-update
// counts, then each agent flips independently. Exactly one uniform is drawn
// per agent, in index order. horizon_means must cover every policy horizon.
void update_strategies(Population& pop, double price,
                       std::span<const HorizonMean> horizon_means,
                       const ModelParams& params, Rng& rng);

// Normalized Beta(eps, eps) density at x in (0, 1).
double equilibrium_density_symmetric(double x, double eps);

// Unnormalized x^{r(1-delta)-1} (1-x)^{r(1+delta)-1} exp(-2 delta nu N).
// Shape-only: use for mode location and skew direction, not absolute values.
double equilibrium_density_asymmetric(double x, double r, double delta,
                                      double nu, int n_agents);

struct ResidenceTimes {
    std::vector<long> fundamentalist; // episode lengths with x below threshold_low
    std::vector<long> chartist;       // episode lengths with x above threshold_high
};

// Segments x(t) = N_c/N into metastable episodes with hysteresis: an episode
// starts when x crosses its entry threshold and persists until the opposite
// threshold is crossed. The trailing unfinished episode is included.
ResidenceTimes residence_times(std::span<const double> x_series,
                               double threshold_low, double threshold_high);

} // namespace fcm
