#include "curvattack/attacks.hpp"

#include <cmath>

#include "curvattack/foliation2d.hpp"

namespace curvattack {

const char* attack_method_name(AttackMethod m) {
    switch (m) {
        case AttackMethod::Ossa: return "ossa";
        case AttackMethod::Tssa: return "tssa";
        case AttackMethod::TssaRot2d: return "tssa-rot2d";
    }
    return "ossa";
}

AttackMethod attack_method_from_name(const std::string& s) {
    if (s == "ossa") return AttackMethod::Ossa;
    if (s == "tssa") return AttackMethod::Tssa;
    if (s == "tssa-rot2d" || s == "tssa_rot2d") return AttackMethod::TssaRot2d;
    throw FormatError("unknown attack method: " + s);
}

Vec choose_sign(const Network& net, const Vec& x, const Vec& v, double step_norm) {
    const int orig = predict_class(net, x);
    const double p_plus = forward(net, x + step_norm * v)[orig];
    const double p_minus = forward(net, x - step_norm * v)[orig];
    return p_minus < p_plus ? Vec(-step_norm * v) : Vec(step_norm * v);
}

namespace {

Vec spectral_direction(const Network& net, const Vec& x) {
    SpectralAttackBasis basis = top_eigenpair(pullback_metric(net, x));
    if (basis.degenerate) throw ZeroMetricError("zero metric at point");
    return basis.top_eigenvector;
}

AttackResult finish(const Network& net, const Vec& x, AttackResult r) {
    r.total = Vec::Zero(x.size());
    for (const Vec& s : r.steps) r.total += s;
    r.p_before = forward(net, x);
    r.p_after = forward(net, x + r.total);
    r.original_class = predict_class(net, x);
    Eigen::Index after = 0;
    r.p_after.maxCoeff(&after);
    r.fooled = static_cast<int>(after) != r.original_class;
    return r;
}

}  // namespace

AttackResult ossa(const Network& net, const Vec& x, double epsilon) {
    if (epsilon <= 0.0) throw Error("ossa: epsilon must be positive");
    AttackResult r;
    r.method = AttackMethod::Ossa;
    r.steps.push_back(choose_sign(net, x, spectral_direction(net, x), epsilon));
    return finish(net, x, r);
}

AttackResult tssa(const Network& net, const Vec& x, const AttackBudget& budget) {
    if (!budget.valid()) throw Error("tssa: invalid budget");
    const double mu = budget.mu();

    AttackResult r;
    r.method = AttackMethod::Tssa;
    Vec step1 = choose_sign(net, x, spectral_direction(net, x), mu);

    Vec dir2;
    try {
        dir2 = spectral_direction(net, x + step1);
    } catch (const ZeroMetricError&) {
        // Metric vanished at the intermediate point; spend the whole budget
        // on the first step to keep budgets comparable.
        r.fallback_to_ossa = true;
        r.steps.push_back((budget.epsilon / mu) * step1);
        return finish(net, x, r);
    }
    // Sign of the second step is chosen against the ORIGINAL class at x,
    // consistent with the fooling-rate definition.
    const int orig = predict_class(net, x);
    const double norm2 = budget.epsilon - mu;
    const double p_plus = forward(net, x + step1 + norm2 * dir2)[orig];
    const double p_minus = forward(net, x + step1 - norm2 * dir2)[orig];
    Vec step2 = p_minus < p_plus ? Vec(-norm2 * dir2) : Vec(norm2 * dir2);

    r.steps.push_back(std::move(step1));
    r.steps.push_back(std::move(step2));
    return finish(net, x, r);
}

AttackResult tssa_rot2d(const Network& net, const Vec& x, const AttackBudget& budget,
                        double dx) {
    if (x.size() != 2)
        throw DimensionError("tssa_rot2d: input dimension must be 2");
    if (!budget.valid()) throw Error("tssa_rot2d: invalid budget");
    const double mu = budget.mu();

    AttackResult r;
    r.method = AttackMethod::TssaRot2d;
    Vec step1 = choose_sign(net, x, spectral_direction(net, x), mu);

    const double dtheta = extrinsic_curvature(net, Vec2(x), dx);
    Eigen::Rotation2D<double> rot(dtheta);
    // |v|^2 + |w|^2 = eps^2  =>  |w| = sqrt(eps^2 - mu^2).
    const double norm2 = std::sqrt(budget.epsilon * budget.epsilon - mu * mu);
    Vec2 w = rot * Vec2(step1);
    r.steps.push_back(step1);
    r.steps.push_back(Vec((norm2 / mu) * w));
    return finish(net, x, r);
}

double kl_divergence(const Network& net, const Vec& x, const Vec& x2) {
    const Vec p = forward(net, x);
    const Vec q = forward(net, x2);
    double kl = 0.0;
    for (Eigen::Index c = 0; c < p.size(); ++c)
        kl += clamp_prob(p[c]) * std::log(clamp_prob(p[c]) / clamp_prob(q[c]));
    return std::max(0.0, kl);
}

}  // namespace curvattack
