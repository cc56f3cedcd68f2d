#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <transopt/model.hpp>
#include <transopt/rng.hpp>

using transopt::Matrix;
using namespace transopt::model;

namespace {

// Two identical locations: h=3, p=2, tau=0.5, L=5, demand N(100,20).
SystemConfig base_system(double tau = 0.5, double period = 10.0) {
    SystemConfig config;
    config.locations = {{3.0, 2.0, {100.0, 20.0}}, {3.0, 2.0, {100.0, 20.0}}};
    config.transship_cost = Matrix{{0.0, tau}, {tau, 0.0}};
    config.lead_time = Matrix{{0.0, 5.0}, {5.0, 0.0}};
    config.period_duration = period;
    return config;
}

SystemConfig random_system(std::mt19937_64& gen, std::size_t n) {
    SystemConfig config;
    for (std::size_t i = 0; i < n; ++i)
        config.locations.push_back({transopt::rng::uniform_real(gen, 0.0, 5.0),
                                    transopt::rng::uniform_real(gen, 0.0, 5.0),
                                    {transopt::rng::uniform_real(gen, 10.0, 100.0),
                                     transopt::rng::uniform_real(gen, 0.0, 30.0)}});
    config.transship_cost = Matrix(n, n, 0.0);
    config.lead_time = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) {
                config.transship_cost(i, j) = transopt::rng::uniform_real(gen, 0.0, 8.0);
                config.lead_time(i, j) = transopt::rng::uniform_real(gen, 1.0, 9.0);
            }
    config.period_duration = 10.0;
    return config;
}

}  // namespace

TEST_CASE("the base two-location configuration validates") {
    CHECK_NOTHROW(validate_config(base_system()));
}

TEST_CASE("a lead time equal to the period is rejected") {
    auto config = base_system(0.5, 5.0);  // L(0,1) = 5 = period
    CHECK_THROWS_AS(validate_config(config), ValidationError);
    CHECK_THROWS_WITH(validate_config(config), Catch::Matchers::ContainsSubstring("lead_time(0,1)"));
}

TEST_CASE("negative transshipment cost is rejected with its indices") {
    auto config = base_system();
    config.transship_cost(0, 1) = -1.0;
    CHECK_THROWS_WITH(validate_config(config), Catch::Matchers::ContainsSubstring("transship_cost(0,1)"));
}

TEST_CASE("validation reports the offending location") {
    auto config = base_system();
    config.locations[1].shortage_cost = -2.0;
    CHECK_THROWS_WITH(validate_config(config), Catch::Matchers::ContainsSubstring("location 1"));
    config = base_system();
    config.locations.clear();
    CHECK_THROWS_AS(validate_config(config), ValidationError);
    config = base_system();
    config.period_duration = 0.0;
    CHECK_THROWS_AS(validate_config(config), ValidationError);
}

TEST_CASE("default period duration covers the longest lead time") {
    const auto config = base_system();
    CHECK(default_period_duration(config.lead_time) == 6.0);
}

TEST_CASE("inventory classification splits surplus and shortage") {
    const auto [su1, sh1] = classify_inventory({{10.0, 0.0}}, {{4.0, 5.0}});
    CHECK(su1 == std::vector<double>{6.0, 0.0});
    CHECK(sh1 == std::vector<double>{0.0, 5.0});

    const auto [su2, sh2] = classify_inventory({{7.0, 3.0}}, {{7.0, 3.0}});
    CHECK(su2 == std::vector<double>{0.0, 0.0});
    CHECK(sh2 == std::vector<double>{0.0, 0.0});

    const auto [su3, sh3] = classify_inventory({{100.0, 100.0}}, {{120.0, 80.0}});
    CHECK(su3 == std::vector<double>{0.0, 20.0});
    CHECK(sh3 == std::vector<double>{20.0, 0.0});

    CHECK_THROWS_AS(classify_inventory({{1.0}}, {{1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("scenario evaluation prices pooling correctly") {
    // Route profit h1 + p2 - tau = 4.5 > 0, ships min(6, 5) = 5:
    // cost = 3*6 + 2*5 - 4.5*5 = 5.5, everything demanded gets served.
    const auto out = evaluate_scenario(base_system(), {{10.0, 0.0}}, {{4.0, 5.0}});
    CHECK(out.plan.quantities(0, 1) == 5.0);
    CHECK(out.newsvendor_cost == Catch::Approx(28.0).margin(1e-12));
    CHECK(out.transship_income == Catch::Approx(22.5).margin(1e-12));
    CHECK(out.cost == Catch::Approx(5.5).margin(1e-12));
    CHECK(out.fill_rate == Catch::Approx(1.0).margin(1e-12));
    CHECK(out.lead_time == Catch::Approx(25.0).margin(1e-12));
}

TEST_CASE("matching stock and demand costs nothing") {
    const auto out = evaluate_scenario(base_system(), {{80.0, 120.0}}, {{80.0, 120.0}});
    CHECK(out.cost == 0.0);
    CHECK(out.fill_rate == 1.0);
    CHECK(out.lead_time == 0.0);
    for (double q : out.plan.quantities.data()) CHECK(q == 0.0);
}

TEST_CASE("prohibitive transshipment cost shuts the routes down") {
    // tau = 10 > h + p = 5: nothing ships, pure newsvendor cost remains.
    const auto out = evaluate_scenario(base_system(10.0), {{10.0, 0.0}}, {{4.0, 5.0}});
    for (double q : out.plan.quantities.data()) CHECK(q == 0.0);
    CHECK(out.transship_income == 0.0);
    CHECK(out.cost == Catch::Approx(28.0).margin(1e-12));
    CHECK(out.lead_time == 0.0);
}

TEST_CASE("cost decomposes into newsvendor cost minus transshipment income") {
    std::mt19937_64 gen(555);
    for (int round = 0; round < 300; ++round) {
        const std::size_t n = 2 + round % 3;
        const auto config = random_system(gen, n);
        BaseStock stock;
        DemandVector demand;
        for (std::size_t i = 0; i < n; ++i) {
            stock.levels.push_back(transopt::rng::uniform_real(gen, 0.0, 60.0));
            demand.demands.push_back(transopt::rng::uniform_real(gen, 0.0, 60.0));
        }
        const auto out = evaluate_scenario(config, stock, demand);

        // recompute the aggregate cost along an independent arithmetic path
        double recomputed = -out.plan.objective_value;
        for (std::size_t i = 0; i < n; ++i) {
            if (stock.levels[i] > demand.demands[i])
                recomputed += config.locations[i].holding_cost * (stock.levels[i] - demand.demands[i]);
            else
                recomputed += config.locations[i].shortage_cost * (demand.demands[i] - stock.levels[i]);
        }
        REQUIRE(out.cost == Catch::Approx(recomputed).margin(1e-9));
        REQUIRE(out.cost == out.newsvendor_cost - out.transship_income);
        REQUIRE(out.transship_income >= 0.0);
        REQUIRE(out.cost <= out.newsvendor_cost + 1e-12);
        REQUIRE(out.fill_rate >= 0.0);
        REQUIRE(out.fill_rate <= 1.0);
        REQUIRE(out.lead_time >= 0.0);
    }
}

TEST_CASE("raising stock never hurts the fill rate") {
    std::mt19937_64 gen(8080);
    for (int round = 0; round < 300; ++round) {
        const std::size_t n = 2 + round % 3;
        const auto config = random_system(gen, n);
        BaseStock lower, higher;
        DemandVector demand;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = transopt::rng::uniform_real(gen, 0.0, 50.0);
            lower.levels.push_back(s);
            higher.levels.push_back(s + transopt::rng::uniform_real(gen, 0.0, 20.0));
            demand.demands.push_back(transopt::rng::uniform_real(gen, 0.0, 50.0));
        }
        const double before = evaluate_scenario(config, lower, demand).fill_rate;
        const double after = evaluate_scenario(config, higher, demand).fill_rate;
        REQUIRE(after >= before - 1e-9);
    }
}

TEST_CASE("relabeling locations leaves the outcome unchanged") {
    std::mt19937_64 gen(1312);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 3;
        const auto config = random_system(gen, n);
        BaseStock stock;
        DemandVector demand;
        for (std::size_t i = 0; i < n; ++i) {
            stock.levels.push_back(transopt::rng::uniform_real(gen, 0.0, 60.0));
            demand.demands.push_back(transopt::rng::uniform_real(gen, 0.0, 60.0));
        }

        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), gen);

        SystemConfig permuted = config;
        BaseStock pstock;
        DemandVector pdemand;
        pstock.levels.resize(n);
        pdemand.demands.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            permuted.locations[i] = config.locations[perm[i]];
            pstock.levels[i] = stock.levels[perm[i]];
            pdemand.demands[i] = demand.demands[perm[i]];
            for (std::size_t j = 0; j < n; ++j) {
                permuted.transship_cost(i, j) = config.transship_cost(perm[i], perm[j]);
                permuted.lead_time(i, j) = config.lead_time(perm[i], perm[j]);
            }
        }

        const auto base = evaluate_scenario(config, stock, demand);
        const auto same = evaluate_scenario(permuted, pstock, pdemand);
        REQUIRE(same.cost == Catch::Approx(base.cost).margin(1e-9));
        REQUIRE(same.fill_rate == Catch::Approx(base.fill_rate).margin(1e-12));
        REQUIRE(same.lead_time == Catch::Approx(base.lead_time).margin(1e-9));
    }
}

TEST_CASE("uniformly prohibitive routes imply a zero plan and zero lead time") {
    std::mt19937_64 gen(2718);
    for (int round = 0; round < 100; ++round) {
        auto config = random_system(gen, 2 + round % 3);
        const std::size_t n = config.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    config.transship_cost(i, j) = config.locations[i].holding_cost +
                                                  config.locations[j].shortage_cost +
                                                  transopt::rng::uniform_real(gen, 0.1, 2.0);
        BaseStock stock;
        DemandVector demand;
        for (std::size_t i = 0; i < n; ++i) {
            stock.levels.push_back(transopt::rng::uniform_real(gen, 0.0, 60.0));
            demand.demands.push_back(transopt::rng::uniform_real(gen, 0.0, 60.0));
        }
        const auto out = evaluate_scenario(config, stock, demand);
        for (double q : out.plan.quantities.data()) REQUIRE(q == 0.0);
        REQUIRE(out.lead_time == 0.0);
        REQUIRE(out.cost == out.newsvendor_cost);
    }
}

TEST_CASE("zero total demand counts as a perfect fill") {
    const auto out = evaluate_scenario(base_system(), {{10.0, 5.0}}, {{0.0, 0.0}});
    CHECK(out.fill_rate == 1.0);
}
