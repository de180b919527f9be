#include "curvattack/bench.hpp"

#include <fstream>

namespace curvattack {

std::vector<double> SweepConfig::budgets() const {
    std::vector<double> out;
    out.reserve(budget_count);
    if (budget_count == 1) {
        out.push_back(budget_min);
        return out;
    }
    const double step = (budget_max - budget_min) / (budget_count - 1);
    for (int i = 0; i < budget_count; ++i) out.push_back(budget_min + i * step);
    return out;
}

AttackResult run_attack(const Network& net, const Vec& x, AttackMethod method,
                        const AttackBudget& budget) {
    switch (method) {
        case AttackMethod::Ossa: return ossa(net, x, budget.epsilon);
        case AttackMethod::Tssa: return tssa(net, x, budget);
        case AttackMethod::TssaRot2d: return tssa_rot2d(net, x, budget);
    }
    throw Error("unknown attack method");
}

FoolingStats fooling_rate(const Network& net, const std::vector<Vec>& points,
                          AttackMethod method, const AttackBudget& budget,
                          const Box2* region) {
    if (points.empty()) throw Error("fooling_rate: empty point population");
    FoolingStats stats;
    if (budget.epsilon == 0.0) return stats;  // no move, rate exactly 0
    int fooled = 0;
    for (const Vec& x : points) {
        try {
            AttackResult r = run_attack(net, x, method, budget);
            if (r.fooled) ++fooled;
            if (region != nullptr && r.total.size() == 2 &&
                !region->contains(Vec2(x) + Vec2(r.total)))
                ++stats.n_out_of_domain;
        } catch (const Error&) {
            ++stats.n_err;  // counts as not fooled; sweeps never abort
        }
    }
    stats.rate = static_cast<double>(fooled) / static_cast<double>(points.size());
    return stats;
}

std::vector<FoolingCurve> run_sweep_points(const SweepConfig& cfg, const Network& net,
                                           const std::vector<Vec>& points,
                                           const Box2* region) {
    std::vector<FoolingCurve> curves;
    const std::vector<double> budgets = cfg.budgets();
    for (AttackMethod method : cfg.methods) {
        FoolingCurve curve;
        curve.method = method;
        curve.budgets = budgets;
        curve.n_points = static_cast<int>(points.size());
        curve.seed = cfg.seed;
        for (double eps : budgets) {
            AttackBudget budget{eps, cfg.split};
            FoolingStats stats = fooling_rate(net, points, method, budget, region);
            curve.rates.push_back(stats.rate);
            curve.n_err.push_back(stats.n_err);
            curve.n_out_of_domain.push_back(stats.n_out_of_domain);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<FoolingCurve> run_sweep(const SweepConfig& cfg, const Network& net) {
    PointPopulation pop = sample_uniform(cfg.region, cfg.n_points, cfg.seed);
    std::vector<Vec> points;
    points.reserve(pop.points.size());
    for (const Vec2& p : pop.points) points.emplace_back(p);
    return run_sweep_points(cfg, net, points, &cfg.region);
}

void write_curves_csv(const std::vector<FoolingCurve>& curves, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open for writing: " + path);
    out << "budget,method,rate,n_err,n_out_of_domain\n";
    out.precision(17);
    for (const FoolingCurve& curve : curves) {
        for (std::size_t i = 0; i < curve.budgets.size(); ++i) {
            out << curve.budgets[i] << ',' << attack_method_name(curve.method) << ','
                << curve.rates[i] << ',' << curve.n_err[i] << ','
                << curve.n_out_of_domain[i] << '\n';
        }
    }
}

}  // namespace curvattack
