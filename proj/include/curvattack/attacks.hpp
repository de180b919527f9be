#pragma once

#include <vector>

#include "curvattack/fim.hpp"
#include "curvattack/network.hpp"
#include "curvattack/types.hpp"

namespace curvattack {

enum class AttackMethod { Ossa, Tssa, TssaRot2d };

const char* attack_method_name(AttackMethod m);
AttackMethod attack_method_from_name(const std::string& s);

/// Euclidean attack budget. split is the fraction of epsilon spent on the
/// first of the two steps (default 0.6).
struct AttackBudget {
    double epsilon = 0.1;
    double split = 0.6;

    double mu() const { return split * epsilon; }
    bool valid() const { return epsilon > 0.0 && split > 0.0 && split < 1.0; }
};

struct AttackResult {
    AttackMethod method = AttackMethod::Ossa;
    std::vector<Vec> steps;
    Vec total;
    Vec p_before;
    Vec p_after;
    int original_class = 0;
    bool fooled = false;
    /// Second-step metric vanished; fell back to full-budget OSSA.
    bool fallback_to_ossa = false;
};

/// Resolves the +/- sign ambiguity of an attack direction: picks the sign
/// that leaves the original class with the smaller probability at
/// x + s * step_norm * v. Ties go to +1.
Vec choose_sign(const Network& net, const Vec& x, const Vec& v, double step_norm);

/// One-step spectral attack: move by epsilon along the top eigenvector of the
/// pullback metric at x, sign-selected. Throws ZeroMetricError when the
/// metric vanishes at x.
AttackResult ossa(const Network& net, const Vec& x, double epsilon);

/// Two-step spectral attack: OSSA step of norm mu at x, then a second
/// sign-selected spectral step of norm epsilon - mu using the metric
/// recomputed at x + v. Total displacement norm <= epsilon.
AttackResult tssa(const Network& net, const Vec& x, const AttackBudget& budget);

/// Rotation-based two-step variant for 2D inputs: the second step is the
/// first one rotated by the local extrinsic curvature angle and rescaled so
/// that |v|^2 + |w|^2 = epsilon^2.
AttackResult tssa_rot2d(const Network& net, const Vec& x, const AttackBudget& budget,
                        double dx = 1e-6);

/// KL divergence between the output distributions at x and x2.
double kl_divergence(const Network& net, const Vec& x, const Vec& x2);

}  // namespace curvattack
