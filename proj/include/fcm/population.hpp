#pragma once
#include <cstdint>
#include <vector>

#include "fcm/params.hpp"

namespace fcm {

enum class Strategy : std::uint8_t { Fundamentalist = 0, Chartist = 1 };

struct Agent {
    Strategy strategy = Strategy::Fundamentalist;
    int horizon = 10; // personal moving-average window, used while Chartist
};

// The agent roster with cached class counts. N_c + N_f == size() always.
class Population {
public:
    Population() = default;

    // n agents; the first round(chartist_fraction * n) are chartists.
    // Horizons are drawn from m_policy in index order, one uniform each.
    Population(int n, double chartist_fraction, const MPolicy& m_policy, Rng& rng);

    int size() const { return static_cast<int>(agents_.size()); }
    int n_c() const { return n_c_; }
    int n_f() const { return size() - n_c_; }
    double frac_c() const { return size() ? static_cast<double>(n_c_) / size() : 0.0; }
    double frac_f() const { return size() ? static_cast<double>(n_f()) / size() : 0.0; }

    const Agent& agent(int i) const { return agents_[static_cast<std::size_t>(i)]; }
    const std::vector<Agent>& agents() const { return agents_; }

    void set_strategy(int i, Strategy s);
    void add(Agent a);
    // Removes agent i by swapping with the last entry.
    void remove_swap(int i);

    // Recomputes the chartist count from the roster (test support).
    int recount_chartists() const;

private:
    std::vector<Agent> agents_;
    int n_c_ = 0;
};

} // namespace fcm
