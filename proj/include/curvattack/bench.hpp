#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvattack/attacks.hpp"
#include "curvattack/data_io.hpp"
#include "curvattack/network.hpp"
#include "curvattack/types.hpp"

namespace curvattack {

/// Per-budget fooling rates for one attack method over a point population.
struct FoolingCurve {
    AttackMethod method = AttackMethod::Ossa;
    std::vector<double> budgets;
    std::vector<double> rates;
    std::vector<int> n_err;            // attacks that raised (zero metric), per budget
    std::vector<int> n_out_of_domain;  // attacked points outside the region, per budget
    int n_points = 0;
    std::uint64_t seed = 0;
};

struct SweepConfig {
    double budget_min = 0.0;
    double budget_max = 0.5;
    int budget_count = 11;
    double split = 0.6;
    int n_points = 5000;
    Box2 region{Vec2(0, 0), Vec2(1, 1)};
    std::uint64_t seed = 0;
    std::vector<AttackMethod> methods{AttackMethod::Ossa, AttackMethod::Tssa};

    std::vector<double> budgets() const;
};

struct FoolingStats {
    double rate = 0.0;
    int n_err = 0;
    int n_out_of_domain = 0;
};

AttackResult run_attack(const Network& net, const Vec& x, AttackMethod method,
                        const AttackBudget& budget);

/// Fraction of points whose argmax class changes under the attack. Points
/// where the attack raises (zero metric) count as not fooled and are tallied
/// in n_err. Budget 0 is exactly rate 0 with no attack evaluated.
FoolingStats fooling_rate(const Network& net, const std::vector<Vec>& points,
                          AttackMethod method, const AttackBudget& budget,
                          const Box2* region = nullptr);

/// One curve per configured method over the budget grid; deterministic given
/// the seed.
std::vector<FoolingCurve> run_sweep(const SweepConfig& cfg, const Network& net);

/// Sweep variant over a fixed point set (e.g. MNIST images).
std::vector<FoolingCurve> run_sweep_points(const SweepConfig& cfg, const Network& net,
                                           const std::vector<Vec>& points,
                                           const Box2* region);

/// CSV with columns budget,method,rate,n_err,n_out_of_domain.
void write_curves_csv(const std::vector<FoolingCurve>& curves, const std::string& path);

}  // namespace curvattack
