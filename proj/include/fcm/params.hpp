#pragma once
#include <string>
#include <vector>

#include "fcm/errors.hpp"
#include "fcm/rng.hpp"

namespace fcm {

// One moving-average horizon and the probability of assigning it to an agent.
struct HorizonWeight {
    int m = 10;
    double weight = 1.0;

    bool operator==(const HorizonWeight&) const = default;
};

// Horizon policy: a single window M, or a weighted set of windows for
// heterogeneous agents. Each agent receives one fixed horizon at creation.
class MPolicy {
public:
    MPolicy() : entries_{HorizonWeight{}} {}

    static MPolicy single(int m) {
        MPolicy p;
        p.entries_ = {HorizonWeight{m, 1.0}};
        return p;
    }

    static MPolicy weighted(std::vector<HorizonWeight> entries) {
        MPolicy p;
        p.entries_ = std::move(entries);
        return p;
    }

    const std::vector<HorizonWeight>& entries() const { return entries_; }
    bool is_single() const { return entries_.size() == 1; }

    int max_horizon() const {
        int m = 0;
        for (const auto& e : entries_) m = e.m > m ? e.m : m;
        return m;
    }

    // Draws one horizon by weight; consumes exactly one uniform.
    int sample(Rng& rng) const {
        double u = rng.uniform();
        double acc = 0.0;
        for (const auto& e : entries_) {
            acc += e.weight;
            if (u < acc) return e.m;
        }
        return entries_.back().m;
    }

    void validate() const;

    bool operator==(const MPolicy&) const = default;

private:
    std::vector<HorizonWeight> entries_;
};

// Scalar model constants. Prices are linear; negative prices are allowed.
struct ModelParams {
    double b = 1.0;          // chartist impact strength, b >= 0
    double gamma = 0.05;     // fundamentalist reversion rate per step, [0, 1)
    double sigma = 0.1;      // noise amplitude per step, sigma >= 0
    double p_f = 100.0;      // fundamental price
    double B = 0.1;          // base switching rate scale, B > 0
    double r = 1.0;          // herding parameter, K = r/N, r >= 0
    double delta = 0.0;      // asymmetry in favor of fundamentalists, (-1, 1)
    MPolicy m_policy = MPolicy::single(10);
    bool exp_coupling = false; // price-signal exponentials on switching rates

    void validate() const;
    bool operator==(const ModelParams&) const = default;
};

} // namespace fcm
