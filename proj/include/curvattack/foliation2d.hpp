#pragma once

#include <functional>
#include <vector>

#include "curvattack/network.hpp"
#include "curvattack/types.hpp"

namespace curvattack {

/// Jacobian norms below this are treated as singular points of the foliation.
inline constexpr double kSingularTol = 1e-10;

enum class TraceDirection { Forward, Backward, Both };

enum class TraceStop { Completed, Singular, LeftRegion };

/// Integral curve of the kernel distribution, with output-invariance
/// diagnostics.
struct LeafTrace {
    std::vector<Vec2> points;
    double output_drift = 0.0;  // max |p(x_t) - p(x_0)| along the trace
    double step = 0.0;
    TraceDirection direction = TraceDirection::Forward;
    TraceStop stop_reason = TraceStop::Completed;
};

struct CurvatureGrid {
    Box2 region;
    int nx = 0;
    int ny = 0;
    double dx = 1e-6;
    std::vector<double> values;  // signed dtheta, row-major (iy * nx + ix)
    std::vector<bool> singular;
};

/// Single-row input Jacobian of a 2D network, as a 2-vector.
Vec2 jacobian_row2(const Network& net, const Vec2& x);

/// Unit kernel direction (J_2, -J_1)/|J|. Sign-ambiguous on its own; trace
/// integration keeps the orientation continuous. Throws SingularPointError
/// when |J| <= kSingularTol.
Vec2 kernel_direction(const Network& net, const Vec2& x);

/// Unit transverse direction J^T/|J|, the direction of maximal output change.
Vec2 transverse_direction(const Network& net, const Vec2& x);

/// RK4 integration of the kernel direction field starting at x0. Stops early
/// when a singular point is hit or the trace leaves `region` (if given).
LeafTrace trace_leaf(const Network& net, const Vec2& x0, double step, int n_steps,
                     TraceDirection direction = TraceDirection::Forward,
                     const Box2* region = nullptr);

/// Signed rotation angle of a unit normal field under a displacement of dx
/// along `dir`: asin of the 2D cross product of the two normals.
double curvature_of_normal_field(const std::function<Vec2(const Vec2&)>& normal,
                                 const Vec2& x, const Vec2& dir, double dx);

/// Extrinsic curvature of the transverse leaf at x: rotation of the kernel
/// leaf normal under a step of dx along the transverse direction.
double extrinsic_curvature(const Network& net, const Vec2& x, double dx = 1e-6);

/// Per-cell extrinsic curvature at cell centers; singular cells are marked
/// instead of raising.
CurvatureGrid curvature_grid(const Network& net, const Box2& region, int nx, int ny,
                             double dx = 1e-6);

}  // namespace curvattack
