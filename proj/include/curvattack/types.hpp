#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace curvattack {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// The pullback metric vanished at the requested point; no attack direction exists.
struct ZeroMetricError : Error {
    explicit ZeroMetricError(const std::string& msg) : Error(msg) {}
};

/// The Jacobian vanished; the kernel leaf degenerates to full dimension.
struct SingularPointError : Error {
    explicit SingularPointError(const std::string& msg) : Error(msg) {}
};

struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

struct DivergenceError : Error {
    explicit DivergenceError(const std::string& msg) : Error(msg) {}
};

/// Axis-aligned box, used for sampling regions and curvature grids.
struct Box2 {
    Vec2 lo;
    Vec2 hi;

    bool contains(const Vec2& p) const {
        return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
    }
};

// Probabilities are clamped away from {0,1} before logs and 1/p factors;
// the Bernoulli Fisher information and the KL divergence blow up at the boundary.
inline constexpr double kProbClamp = 1e-12;

inline double clamp_prob(double p) {
    if (p < kProbClamp) return kProbClamp;
    if (p > 1.0 - kProbClamp) return 1.0 - kProbClamp;
    return p;
}

}  // namespace curvattack
