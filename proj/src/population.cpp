#include "fcm/population.hpp"

#include <cmath>

#include "fcm/errors.hpp"

namespace fcm {

Population::Population(int n, double chartist_fraction, const MPolicy& m_policy,
                       Rng& rng) {
    if (n < 0) throw ValidationError("Population: size must be >= 0");
    if (!(chartist_fraction >= 0.0 && chartist_fraction <= 1.0)) {
        throw ValidationError("Population: chartist_fraction must be in [0, 1]");
    }
    const int chartists =
        static_cast<int>(std::llround(chartist_fraction * static_cast<double>(n)));
    agents_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Agent a;
        a.strategy = i < chartists ? Strategy::Chartist : Strategy::Fundamentalist;
        a.horizon = m_policy.sample(rng);
        agents_.push_back(a);
    }
    n_c_ = chartists;
}

void Population::set_strategy(int i, Strategy s) {
    Agent& a = agents_[static_cast<std::size_t>(i)];
    if (a.strategy == s) return;
    n_c_ += s == Strategy::Chartist ? 1 : -1;
    a.strategy = s;
}

void Population::add(Agent a) {
    if (a.strategy == Strategy::Chartist) ++n_c_;
    agents_.push_back(a);
}

void Population::remove_swap(int i) {
    if (agents_[static_cast<std::size_t>(i)].strategy == Strategy::Chartist) --n_c_;
    agents_[static_cast<std::size_t>(i)] = agents_.back();
    agents_.pop_back();
}

int Population::recount_chartists() const {
    int c = 0;
    for (const auto& a : agents_) c += a.strategy == Strategy::Chartist ? 1 : 0;
    return c;
}

} // namespace fcm
