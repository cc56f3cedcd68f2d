#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <transopt/sampling.hpp>

using transopt::Matrix;
using namespace transopt::model;
using namespace transopt::sampling;

namespace {

SystemConfig base_system(double tau = 0.5, double std_dev = 20.0) {
    SystemConfig config;
    config.locations = {{3.0, 2.0, {100.0, std_dev}}, {3.0, 2.0, {100.0, std_dev}}};
    config.transship_cost = Matrix{{0.0, tau}, {tau, 0.0}};
    config.lead_time = Matrix{{0.0, 5.0}, {5.0, 0.0}};
    config.period_duration = 10.0;
    return config;
}

// E[max(X, 0)] for X ~ N(mean, std): Simpson quadrature of x * pdf over
// [0, mean + 12 std]; reference value independent of the sampler.
double clamped_normal_mean(double mean, double std) {
    const double upper = mean + 12.0 * std;
    const int intervals = 20000;  // even
    const double h = upper / intervals;
    auto integrand = [&](double x) {
        const double z = (x - mean) / std;
        return x * std::exp(-0.5 * z * z) / (std * std::sqrt(2.0 * 3.14159265358979323846));
    };
    double sum = integrand(0.0) + integrand(upper);
    for (int i = 1; i < intervals; ++i) sum += integrand(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

bool same_pool(const ScenarioSet& a, const ScenarioSet& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a.scenarios[k].demands != b.scenarios[k].demands) return false;
    return true;
}

}  // namespace

TEST_CASE("scenario pools are reproducible and prefix-stable") {
    const auto config = base_system();
    const auto first = sample_scenarios(config, 500, 42);
    const auto second = sample_scenarios(config, 500, 42);
    CHECK(same_pool(first, second));

    // scenario k depends on (seed, k) only, not on the pool size
    const auto shorter = sample_scenarios(config, 100, 42);
    for (std::size_t k = 0; k < shorter.size(); ++k)
        CHECK(shorter.scenarios[k].demands == first.scenarios[k].demands);

    const auto other_seed = sample_scenarios(config, 500, 43);
    CHECK_FALSE(same_pool(first, other_seed));

    CHECK_THROWS_AS(sample_scenarios(config, 0, 42), std::invalid_argument);
}

TEST_CASE("degenerate demand collapses to its mean") {
    const auto config = base_system(0.5, 0.0);
    const auto pool = sample_scenarios(config, 50, 7);
    for (const auto& scenario : pool.scenarios)
        for (double d : scenario.demands) CHECK(d == 100.0);

    const auto estimate = estimate_objectives(config, {{90.0, 115.0}}, pool);
    const auto outcome = evaluate_scenario(config, {{90.0, 115.0}}, pool.scenarios.front());
    CHECK(estimate.cost_mean == outcome.cost);
    CHECK(estimate.fill_mean == outcome.fill_rate);
    CHECK(estimate.lead_mean == outcome.lead_time);
    CHECK(estimate.cost_stderr == 0.0);
    CHECK(estimate.fill_stderr == 0.0);
    CHECK(estimate.lead_stderr == 0.0);
}

TEST_CASE("sampled demand matches the truncated-normal mean") {
    const auto config = base_system();
    const auto pool = sample_scenarios(config, 10000, 2024);
    const double reference = clamped_normal_mean(100.0, 20.0);
    double sum0 = 0.0, sum1 = 0.0;
    for (const auto& scenario : pool.scenarios) {
        sum0 += scenario.demands[0];
        sum1 += scenario.demands[1];
        REQUIRE(scenario.demands[0] >= 0.0);
        REQUIRE(scenario.demands[1] >= 0.0);
    }
    const double bound = 3.0 * 20.0 / std::sqrt(10000.0);
    CHECK(std::fabs(sum0 / 10000.0 - reference) < bound);
    CHECK(std::fabs(sum1 / 10000.0 - reference) < bound);
}

TEST_CASE("a single-scenario pool reproduces the hand-computed outcome") {
    ScenarioSet pool;
    pool.scenarios.push_back({{4.0, 5.0}});
    const auto estimate = estimate_objectives(base_system(), {{10.0, 0.0}}, pool);
    CHECK(estimate.cost_mean == Catch::Approx(5.5).margin(1e-12));
    CHECK(estimate.fill_mean == Catch::Approx(1.0).margin(1e-12));
    CHECK(estimate.lead_mean == Catch::Approx(25.0).margin(1e-12));
    CHECK(estimate.cost_stderr == 0.0);
    CHECK(estimate.fill_stderr == 0.0);
    CHECK(estimate.lead_stderr == 0.0);
    CHECK(estimate.sample_count == 1);
}

TEST_CASE("estimates are symmetric under swapping the two locations") {
    const auto config = base_system();
    const auto pool = sample_scenarios(config, 400, 11);
    ScenarioSet swapped;
    swapped.seed = pool.seed;
    for (const auto& scenario : pool.scenarios)
        swapped.scenarios.push_back({{scenario.demands[1], scenario.demands[0]}});

    std::mt19937_64 gen(31337);
    for (int round = 0; round < 20; ++round) {
        const double a = transopt::rng::uniform_real(gen, 0.0, 200.0);
        const double b = transopt::rng::uniform_real(gen, 0.0, 200.0);
        const auto direct = estimate_objectives(config, {{a, b}}, pool);
        const auto mirrored = estimate_objectives(config, {{b, a}}, swapped);
        REQUIRE(direct.cost_mean == mirrored.cost_mean);
        REQUIRE(direct.fill_mean == mirrored.fill_mean);
        REQUIRE(direct.lead_mean == mirrored.lead_mean);
        REQUIRE(direct.cost_stderr == mirrored.cost_stderr);
    }
}

TEST_CASE("the cost mean decomposes over any pool") {
    const auto config = base_system();
    const auto pool = sample_scenarios(config, 1000, 97);
    std::mt19937_64 gen(4);
    for (int round = 0; round < 10; ++round) {
        BaseStock stock{{transopt::rng::uniform_real(gen, 0.0, 250.0),
                         transopt::rng::uniform_real(gen, 0.0, 250.0)}};
        const auto estimate = estimate_objectives(config, stock, pool);
        const auto split = estimate_decomposition(config, stock, pool);
        REQUIRE(estimate.cost_mean ==
                Catch::Approx(split.newsvendor_mean - split.transship_income_mean).margin(1e-9));
    }
}

TEST_CASE("prohibitive routes earn no transshipment income") {
    const auto expensive = base_system(10.0);  // tau > h + p
    const auto pool = sample_scenarios(expensive, 500, 5);
    const auto split = estimate_decomposition(expensive, {{100.0, 100.0}}, pool);
    CHECK(split.transship_income_mean == 0.0);
    const auto estimate = estimate_objectives(expensive, {{100.0, 100.0}}, pool);
    CHECK(estimate.cost_mean == split.newsvendor_mean);
}

TEST_CASE("cheap transshipment can only lower the expected cost") {
    const auto cheap = base_system(0.5);
    const auto expensive = base_system(10.0);
    const auto pool = sample_scenarios(cheap, 800, 64);  // same demand pool for both cost structures
    const auto low = estimate_objectives(cheap, {{100.0, 100.0}}, pool);
    const auto high = estimate_objectives(expensive, {{100.0, 100.0}}, pool);
    CHECK(low.cost_mean <= high.cost_mean);
}

TEST_CASE("independently seeded estimates agree within sampling error") {
    const auto config = base_system();
    const BaseStock stock{{100.0, 100.0}};
    const auto first = estimate_objectives(config, stock, sample_scenarios(config, 100000, 1));
    const auto second = estimate_objectives(config, stock, sample_scenarios(config, 100000, 2));
    const double combined = std::sqrt(first.cost_stderr * first.cost_stderr +
                                      second.cost_stderr * second.cost_stderr);
    CHECK(std::fabs(first.cost_mean - second.cost_mean) < 3.0 * combined);
}

TEST_CASE("empty pools are rejected") {
    ScenarioSet empty;
    CHECK_THROWS_AS(estimate_objectives(base_system(), {{1.0, 1.0}}, empty), std::invalid_argument);
    CHECK_THROWS_AS(estimate_decomposition(base_system(), {{1.0, 1.0}}, empty), std::invalid_argument);
}
