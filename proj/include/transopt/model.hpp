#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "transship.hpp"

namespace transopt::model {

// Demand at one location: N(mean, std_dev) truncated at zero (sample, then
// clamp negatives).
struct DemandSpec {
    double mean = 0.0;
    double std_dev = 0.0;
};

struct LocationParams {
    double holding_cost = 0.0;   // per unit left over after transshipment
    double shortage_cost = 0.0;  // per unit of demand lost after transshipment
    DemandSpec demand;
};

// An n-location single-product system. Matrix entry (i,j) prices/times a unit
// shipped from i to j; diagonals are unused (a location never ships to
// itself).
struct SystemConfig {
    std::vector<LocationParams> locations;
    Matrix transship_cost;  // tau(i,j)
    Matrix lead_time;       // L(i,j)
    double period_duration = 0.0;

    std::size_t size() const { return locations.size(); }
};

// Order-up-to levels S, one per location: the decision vector.
struct BaseStock {
    std::vector<double> levels;
};

struct DemandVector {
    std::vector<double> demands;
};

// Everything observable about one demand realization under one stock choice.
// cost == newsvendor_cost - transship_income holds exactly by construction.
struct ScenarioOutcome {
    double cost = 0.0;
    double fill_rate = 1.0;
    double lead_time = 0.0;
    transship::TransshipmentPlan plan;
    double newsvendor_cost = 0.0;   // holding + shortage cost with no transshipment
    double transship_income = 0.0;  // K: the plan's aggregate profit
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fallback when a configuration does not state a period length: just long
// enough that every lead time fits inside the period.
inline double default_period_duration(const Matrix& lead_time) {
    double longest = 0.0;
    for (double v : lead_time.data()) longest = std::max(longest, v);
    return longest + 1.0;
}

namespace detail {

inline std::string at_location(std::size_t i) { return "location " + std::to_string(i); }

inline std::string at_cell(const char* name, std::size_t i, std::size_t j) {
    return std::string(name) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

inline void check_matrix(const Matrix& m, const char* name, std::size_t n) {
    if (m.rows() != n || m.cols() != n)
        throw ValidationError(std::string(name) + " must be " + std::to_string(n) + "x" + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(m(i, j)) || m(i, j) < 0.0)
                throw ValidationError(at_cell(name, i, j) + " must be finite and >= 0");
}

}  // namespace detail

// Checks every structural invariant and rethrows the first violation with its
// location or matrix indices. Returns the config unchanged on success.
inline SystemConfig validate_config(SystemConfig config) {
    const std::size_t n = config.size();
    if (n == 0) throw ValidationError("configuration needs at least one location");
    for (std::size_t i = 0; i < n; ++i) {
        const auto& loc = config.locations[i];
        if (!std::isfinite(loc.holding_cost) || loc.holding_cost < 0.0)
            throw ValidationError(detail::at_location(i) + ": holding_cost must be finite and >= 0");
        if (!std::isfinite(loc.shortage_cost) || loc.shortage_cost < 0.0)
            throw ValidationError(detail::at_location(i) + ": shortage_cost must be finite and >= 0");
        if (!std::isfinite(loc.demand.mean) || loc.demand.mean < 0.0)
            throw ValidationError(detail::at_location(i) + ": demand mean must be finite and >= 0");
        if (!std::isfinite(loc.demand.std_dev) || loc.demand.std_dev < 0.0)
            throw ValidationError(detail::at_location(i) + ": demand std_dev must be finite and >= 0");
    }
    detail::check_matrix(config.transship_cost, "transship_cost", n);
    detail::check_matrix(config.lead_time, "lead_time", n);
    if (!std::isfinite(config.period_duration) || config.period_duration <= 0.0)
        throw ValidationError("period_duration must be finite and > 0");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && config.lead_time(i, j) >= config.period_duration)
                throw ValidationError(detail::at_cell("lead_time", i, j) +
                                      " must be less than period_duration (transshipments finish within the period)");
    return config;
}

// surplus_i = (S_i - D_i)+, shortage_j = (D_j - S_j)+. The positive-support
// index sets are disjoint by construction.
inline std::pair<std::vector<double>, std::vector<double>> classify_inventory(const BaseStock& stock,
                                                                              const DemandVector& demand) {
    if (stock.levels.size() != demand.demands.size())
        throw std::invalid_argument("classify_inventory: stock and demand lengths differ");
    const std::size_t n = stock.levels.size();
    std::vector<double> surplus(n), shortage(n);
    for (std::size_t i = 0; i < n; ++i) {
        surplus[i] = std::max(0.0, stock.levels[i] - demand.demands[i]);
        shortage[i] = std::max(0.0, demand.demands[i] - stock.levels[i]);
    }
    return {std::move(surplus), std::move(shortage)};
}

// Unit profit of shipping i -> j: the holding cost saved at i plus the
// shortage penalty saved at j minus the transshipment charge. Diagonal pinned
// to zero so self-shipping can never enter a plan.
inline Matrix route_profit(const SystemConfig& config) {
    const std::size_t n = config.size();
    Matrix profit(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                profit(i, j) = config.locations[i].holding_cost + config.locations[j].shortage_cost -
                               config.transship_cost(i, j);
    return profit;
}

// One period, exactly: classify, solve the transshipment program, and price
// the outcome. Fill rate counts transshipped units as satisfied demand and is
// defined as 1 when there is no demand at all.
inline ScenarioOutcome evaluate_scenario(const SystemConfig& config, const BaseStock& stock,
                                         const DemandVector& demand) {
    const std::size_t n = config.size();
    if (stock.levels.size() != n || demand.demands.size() != n)
        throw std::invalid_argument("evaluate_scenario: dimension mismatch with configuration");

    const auto [surplus, shortage] = classify_inventory(stock, demand);

    ScenarioOutcome out;
    out.plan = transship::solve_transshipment(route_profit(config), surplus, shortage);
    out.transship_income = out.plan.objective_value;

    double holding = 0.0, penalty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        holding += config.locations[i].holding_cost * surplus[i];
        penalty += config.locations[i].shortage_cost * shortage[i];
    }
    out.newsvendor_cost = holding + penalty;
    out.cost = out.newsvendor_cost - out.transship_income;

    double total_demand = 0.0, filled = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double received = 0.0;
        for (std::size_t i = 0; i < n; ++i) received += out.plan.quantities(i, j);
        filled += std::min(demand.demands[j], stock.levels[j] + received);
        total_demand += demand.demands[j];
    }
    out.fill_rate = total_demand > 0.0 ? filled / total_demand : 1.0;

    double lead = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) lead += out.plan.quantities(i, j) * config.lead_time(i, j);
    out.lead_time = lead;
    return out;
}

}  // namespace transopt::model
