#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "curvattack/bench.hpp"
#include "test_util.hpp"

using namespace curvattack;
using namespace curvattack::testing;

TEST_CASE("fooling_rate: budget zero is exactly zero") {
    const Network& net = trained_xor_net();
    PointPopulation pop = sample_uniform({Vec2(0, 0), Vec2(1, 1)}, 50, 1);
    std::vector<Vec> points(pop.points.begin(), pop.points.end());
    for (AttackMethod m : {AttackMethod::Ossa, AttackMethod::Tssa}) {
        FoolingStats stats = fooling_rate(net, points, m, AttackBudget{0.0, 0.6});
        CHECK(stats.rate == 0.0);
        CHECK(stats.n_err == 0);
    }
}

TEST_CASE("fooling_rate: single known-fooled point gives 1.0") {
    const Network& net = trained_xor_net();
    // find a point that OSSA fools at eps 0.3
    PointPopulation pop = sample_uniform({Vec2(0, 0), Vec2(1, 1)}, 200, 2);
    for (const Vec2& p : pop.points) {
        AttackResult r = ossa(net, Vec(p), 0.3);
        if (r.fooled) {
            FoolingStats stats =
                fooling_rate(net, {Vec(p)}, AttackMethod::Ossa, AttackBudget{0.3, 0.6});
            CHECK(stats.rate == 1.0);
            return;
        }
    }
    FAIL("no fooled point found at eps=0.3");
}

TEST_CASE("fooling_rate: empty population raises") {
    const Network& net = trained_xor_net();
    CHECK_THROWS_AS(fooling_rate(net, {}, AttackMethod::Ossa, AttackBudget{0.1, 0.6}),
                    Error);
}

TEST_CASE("fooling_rate: errors are counted, not fatal") {
    // zero network: every attack hits the zero metric
    Network net;
    net.head = OutputHead::Bernoulli;
    net.layers.push_back({Mat::Zero(1, 2), Vec::Zero(1), Activation::Sigmoid});
    std::vector<Vec> points{Vec2(0.1, 0.1), Vec2(0.5, 0.5)};
    FoolingStats stats = fooling_rate(net, points, AttackMethod::Ossa,
                                      AttackBudget{0.1, 0.6});
    CHECK(stats.rate == 0.0);
    CHECK(stats.n_err == 2);
}

TEST_CASE("run_sweep: shapes and trivial cases") {
    const Network& net = trained_xor_net();
    SweepConfig cfg;
    cfg.budget_min = 0.0;
    cfg.budget_max = 0.0;
    cfg.budget_count = 1;
    cfg.n_points = 20;
    cfg.seed = 4;
    auto curves = run_sweep(cfg, net);
    REQUIRE(curves.size() == 2);
    for (const auto& c : curves) {
        REQUIRE(c.rates.size() == 1);
        CHECK(c.rates[0] == 0.0);
    }
}

TEST_CASE("run_sweep: rates in [0,1] and deterministic per seed") {
    const Network& net = trained_xor_net();
    SweepConfig cfg;
    cfg.budget_count = 5;
    cfg.n_points = 100;
    cfg.seed = 6;
    auto a = run_sweep(cfg, net);
    auto b = run_sweep(cfg, net);
    for (std::size_t m = 0; m < a.size(); ++m) {
        for (std::size_t i = 0; i < a[m].rates.size(); ++i) {
            CHECK(a[m].rates[i] >= 0.0);
            CHECK(a[m].rates[i] <= 1.0);
            CHECK(a[m].rates[i] == b[m].rates[i]);
        }
    }
}

TEST_CASE("run_sweep: tssa at least matches ossa at a moderate budget") {
    const Network& net = trained_xor_net();
    PointPopulation pop = sample_uniform({Vec2(0, 0), Vec2(1, 1)}, 1000, 7);
    std::vector<Vec> points(pop.points.begin(), pop.points.end());
    const AttackBudget budget{0.3, 0.6};
    const double r_ossa = fooling_rate(net, points, AttackMethod::Ossa, budget).rate;
    const double r_tssa = fooling_rate(net, points, AttackMethod::Tssa, budget).rate;
    CHECK(r_tssa >= r_ossa);
}

TEST_CASE("write_curves_csv: parses back with consistent fields") {
    const Network& net = trained_xor_net();
    SweepConfig cfg;
    cfg.budget_count = 3;
    cfg.n_points = 10;
    auto curves = run_sweep(cfg, net);
    const std::string path = "/tmp/curvattack_test_sweep.csv";
    write_curves_csv(curves, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "budget,method,rate,n_err,n_out_of_domain");
    int rows = 0;
    while (std::getline(in, line)) {
        int commas = 0;
        for (char c : line) commas += (c == ',');
        CHECK(commas == 4);
        ++rows;
    }
    CHECK(rows == 6);
    std::remove(path.c_str());
}
