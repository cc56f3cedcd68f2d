#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace transopt::sampling {

// A fixed pool of demand realizations, drawn once and reused across candidate
// evaluations (common random numbers). Scenario k is generated from substream
// (seed, k), so regenerating with the same seed reproduces the pool
// bit-for-bit no matter the pool size.
struct ScenarioSet {
    std::vector<model::DemandVector> scenarios;
    std::uint64_t seed = 0;

    std::size_t size() const { return scenarios.size(); }
};

// Sample means of the three objectives with their standard errors
// (sample std / sqrt(N), unbiased variance).
struct ObjectiveEstimate {
    double cost_mean = 0.0;
    double fill_mean = 1.0;
    double lead_mean = 0.0;
    double cost_stderr = 0.0;
    double fill_stderr = 0.0;
    double lead_stderr = 0.0;
    std::size_t sample_count = 0;
};

struct CostDecomposition {
    double newsvendor_mean = 0.0;
    double transship_income_mean = 0.0;
};

namespace detail {

// Welford accumulator. Chosen over sum-of-squares so a constant series yields
// an exactly zero variance.
class RunningStat {
public:
    void add(double x) {
        count_ += 1.0;
        const double delta = x - mean_;
        mean_ += delta / count_;
        m2_ += delta * (x - mean_);
    }

    double mean() const { return mean_; }

    double stderr_of_mean() const {
        if (count_ < 2.0) return 0.0;
        return std::sqrt(std::max(0.0, m2_) / ((count_ - 1.0) * count_));
    }

private:
    double count_ = 0.0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace detail

inline model::DemandVector sample_demand(const model::SystemConfig& config, std::uint64_t seed,
                                         std::uint64_t index) {
    std::mt19937_64 gen(rng::substream_seed(seed, index));
    model::DemandVector demand;
    demand.demands.reserve(config.size());
    for (const auto& location : config.locations) {
        const double raw = location.demand.mean + location.demand.std_dev * rng::standard_normal(gen);
        demand.demands.push_back(std::max(0.0, raw));
    }
    return demand;
}

inline ScenarioSet sample_scenarios(const model::SystemConfig& config, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("sample_scenarios: need at least one scenario");
    ScenarioSet pool;
    pool.seed = seed;
    pool.scenarios.reserve(count);
    for (std::size_t k = 0; k < count; ++k) pool.scenarios.push_back(sample_demand(config, seed, k));
    return pool;
}

// Averages the per-scenario outcomes over the pool. Scenarios are consumed in
// pool order with a fixed sequential reduction, so the same pool and stock
// always produce the identical estimate.
inline ObjectiveEstimate estimate_objectives(const model::SystemConfig& config, const model::BaseStock& stock,
                                             const ScenarioSet& pool) {
    if (pool.size() == 0) throw std::invalid_argument("estimate_objectives: empty scenario pool");
    detail::RunningStat cost, fill, lead;
    for (const auto& demand : pool.scenarios) {
        const auto outcome = model::evaluate_scenario(config, stock, demand);
        cost.add(outcome.cost);
        fill.add(outcome.fill_rate);
        lead.add(outcome.lead_time);
    }
    ObjectiveEstimate estimate;
    estimate.cost_mean = cost.mean();
    estimate.fill_mean = std::clamp(fill.mean(), 0.0, 1.0);
    estimate.lead_mean = lead.mean();
    estimate.cost_stderr = cost.stderr_of_mean();
    estimate.fill_stderr = fill.stderr_of_mean();
    estimate.lead_stderr = lead.stderr_of_mean();
    estimate.sample_count = pool.size();
    return estimate;
}

// Mean newsvendor cost and mean transshipment income over the same pool;
// their difference reproduces the cost mean scenario by scenario.
inline CostDecomposition estimate_decomposition(const model::SystemConfig& config, const model::BaseStock& stock,
                                                const ScenarioSet& pool) {
    if (pool.size() == 0) throw std::invalid_argument("estimate_decomposition: empty scenario pool");
    detail::RunningStat newsvendor, income;
    for (const auto& demand : pool.scenarios) {
        const auto outcome = model::evaluate_scenario(config, stock, demand);
        newsvendor.add(outcome.newsvendor_cost);
        income.add(outcome.transship_income);
    }
    return {newsvendor.mean(), income.mean()};
}

}  // namespace transopt::sampling
