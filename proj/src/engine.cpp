#include "fcm/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "fcm/errors.hpp"
#include "fcm/market.hpp"
#include "fcm/population.hpp"
#include "fcm/switching.hpp"

namespace fcm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kPriceMagnitudeLimit = 1e300;

} // namespace

void SimConfig::validate() const {
    params.validate();
    if (n_initial < 1) throw ValidationError("n_initial: must be >= 1");
    if (steps < 1) throw ValidationError("steps: must be >= 1");
    if (burn_in < 0) throw ValidationError("burn_in: must be >= 0");
    if (steps <= burn_in) throw ValidationError("steps: must exceed burn_in");
    if (record_every < 1) throw ValidationError("record_every: must be >= 1");
    if (!(init_chartist_fraction >= 0.0 && init_chartist_fraction <= 1.0)) {
        throw ValidationError("init_chartist_fraction: must be in [0, 1]");
    }
    if (variance_window != 0 && variance_window < 2) {
        throw ValidationError("variance_window: must be 0 (off) or >= 2");
    }
    if (!(std::isfinite(price_floor) && price_floor >= 0.0)) {
        throw ValidationError("price_floor: must be finite and >= 0");
    }
    if (n_policy == NPolicy::SelfOrganizing) {
        if (!selforg) {
            throw ValidationError("selforg: policy required when n_policy is selforg");
        }
        selforg->validate();
        if (n_initial < selforg->n_min || n_initial > selforg->n_max) {
            throw ValidationError("n_initial: must lie within [n_min, n_max]");
        }
    }
}

namespace {

// Distinct policy horizons in first-appearance order.
std::vector<int> policy_horizons(const MPolicy& policy) {
    std::vector<int> hs;
    for (const auto& e : policy.entries()) {
        if (std::find(hs.begin(), hs.end(), e.m) == hs.end()) hs.push_back(e.m);
    }
    return hs;
}

// Chartist count per horizon. Single-horizon policies skip the roster scan.
void fill_counts(const Population& pop, const std::vector<int>& horizons,
                 std::vector<HorizonMean>& means) {
    if (horizons.size() == 1) {
        means[0].count = pop.n_c();
        return;
    }
    for (auto& hm : means) hm.count = 0;
    for (const auto& a : pop.agents()) {
        if (a.strategy != Strategy::Chartist) continue;
        for (std::size_t j = 0; j < horizons.size(); ++j) {
            if (horizons[j] == a.horizon) {
                ++means[j].count;
                break;
            }
        }
    }
}

void fill_means(const MarketState& state, const std::vector<int>& horizons,
                std::vector<HorizonMean>& means) {
    for (std::size_t j = 0; j < horizons.size(); ++j) {
        means[j].m = horizons[j];
        means[j].mean = moving_average(state, horizons[j]);
    }
}

} // namespace

SimOutput run_simulation(const SimConfig& config) {
    config.validate();
    const ModelParams& mp = config.params;
    Rng rng(config.seed);

    const int max_m = mp.m_policy.max_horizon();
    std::size_t capacity = static_cast<std::size_t>(max_m) + 1;
    const int var_window = config.n_policy == NPolicy::SelfOrganizing
                               ? config.selforg->window_t
                               : config.variance_window;
    if (var_window > 0) {
        capacity = std::max(capacity, static_cast<std::size_t>(var_window));
    }

    // Flat warm-up: max-horizon prices before t=0, then p(0), all at p_f.
    MarketState state(capacity);
    for (int i = 0; i <= max_m; ++i) state.push(mp.p_f);

    Population pop(config.n_initial, config.init_chartist_fraction, mp.m_policy, rng);

    const std::vector<int> horizons = policy_horizons(mp.m_policy);
    std::vector<HorizonMean> means(horizons.size());

    SimOutput out;
    out.config = config;
    out.version = kVersion;

    const long n_records =
        (config.steps - config.burn_in + config.record_every - 1) / config.record_every;
    out.step.reserve(static_cast<std::size_t>(n_records));
    out.price.reserve(static_cast<std::size_t>(n_records));
    out.ret.reserve(static_cast<std::size_t>(n_records));
    out.n_c.reserve(static_cast<std::size_t>(n_records));
    out.n_f.reserve(static_cast<std::size_t>(n_records));
    out.n.reserve(static_cast<std::size_t>(n_records));
    out.rolling_variance.reserve(static_cast<std::size_t>(n_records));

    // Returns in the recorded series are differences of consecutive recorded
    // prices, so the file stays self-consistent at any record_every.
    double last_recorded = state.price();

    for (long s = 1; s <= config.steps; ++s) {
        // (1) noise draw and price update.
        const double xi = rng.normal();
        fill_means(state, horizons, means);
        fill_counts(pop, horizons, means);
        const double prev = state.price();
        double next = price_step(state, mp, pop.frac_c(), pop.frac_f(), xi, means,
                                 pop.size());
        if (config.price_floor > 0.0 && next < config.price_floor) {
            next = config.price_floor;
        }
        if (!std::isfinite(next) || std::abs(next) > kPriceMagnitudeLimit) {
            out.status = RunStatus::Overflow;
            out.message = "price overflow at step " + std::to_string(s);
            break;
        }
        state.push(next);

        // (2) synchronous strategy update at the new price.
        fill_means(state, horizons, means);
        update_strategies(pop, next, means, mp, rng);

        // (3) rolling variance, then population flow when self-organizing.
        // Undefined until the window holds var_window real prices.
        double sigma_t = kNan;
        if (var_window >= 2 &&
            state.history_size() >= static_cast<std::size_t>(var_window)) {
            sigma_t = rolling_variance(state, var_window);
        }
        if (config.n_policy == NPolicy::SelfOrganizing && std::isfinite(sigma_t)) {
            population_flow_step(pop, sigma_t, *config.selforg, mp, rng);
        }

        if (s == config.burn_in + 1) last_recorded = prev;
        if (s > config.burn_in &&
            (s - config.burn_in - 1) % config.record_every == 0) {
            out.step.push_back(s);
            out.price.push_back(next);
            out.ret.push_back(next - last_recorded);
            last_recorded = next;
            out.n_c.push_back(pop.n_c());
            out.n_f.push_back(pop.n_f());
            out.n.push_back(pop.size());
            out.rolling_variance.push_back(sigma_t);
        }
    }
    return out;
}

std::vector<SimOutput> run_ensemble(std::span<const SimConfig> configs,
                                    int max_parallel) {
    if (configs.empty()) throw ValidationError("run_ensemble: configs must be nonempty");
    if (max_parallel < 1) throw ValidationError("run_ensemble: max_parallel must be >= 1");

    std::vector<SimOutput> results(configs.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= configs.size()) return;
            try {
                results[i] = run_simulation(configs[i]);
            } catch (const std::exception& e) {
                results[i].config = configs[i];
                results[i].version = kVersion;
                results[i].status = RunStatus::Invalid;
                results[i].message = e.what();
            }
        }
    };

    const std::size_t n_threads = std::min(static_cast<std::size_t>(max_parallel),
                                           configs.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return results;
}

} // namespace fcm
