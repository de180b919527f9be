#include "curvattack/foliation2d.hpp"

#include <algorithm>
#include <cmath>

namespace curvattack {

Vec2 jacobian_row2(const Network& net, const Vec2& x) {
    if (net.input_dim() != 2)
        throw DimensionError("foliation2d: input dimension must be 2");
    if (net.head != OutputHead::Bernoulli)
        throw Error("foliation2d: requires a bernoulli output head");
    Mat jac = input_jacobian(net, Vec(x));
    return Vec2(jac(0, 0), jac(0, 1));
}

Vec2 kernel_direction(const Network& net, const Vec2& x) {
    const Vec2 j = jacobian_row2(net, x);
    const double norm = j.norm();
    if (norm <= kSingularTol)
        throw SingularPointError("singular point: |J| = " + std::to_string(norm));
    return Vec2(j.y(), -j.x()) / norm;
}

Vec2 transverse_direction(const Network& net, const Vec2& x) {
    const Vec2 j = jacobian_row2(net, x);
    const double norm = j.norm();
    if (norm <= kSingularTol)
        throw SingularPointError("singular point: |J| = " + std::to_string(norm));
    return j / norm;
}

namespace {

// Kernel direction aligned with a reference tangent. Span(.) is
// sign-ambiguous; naive evaluation causes back-tracking.
Vec2 oriented_kernel_direction(const Network& net, const Vec2& x, const Vec2& ref) {
    Vec2 d = kernel_direction(net, x);
    if (d.dot(ref) < 0.0) d = -d;
    return d;
}

struct HalfTrace {
    std::vector<Vec2> points;
    TraceStop stop = TraceStop::Completed;
};

HalfTrace integrate(const Network& net, const Vec2& x0, double step, int n_steps,
                    double sign, const Box2* region) {
    HalfTrace half;
    half.points.push_back(x0);
    Vec2 tangent = sign * kernel_direction(net, x0);
    Vec2 x = x0;
    for (int i = 0; i < n_steps; ++i) {
        Vec2 k1, k2, k3, k4;
        try {
            k1 = oriented_kernel_direction(net, x, tangent);
            k2 = oriented_kernel_direction(net, x + 0.5 * step * k1, k1);
            k3 = oriented_kernel_direction(net, x + 0.5 * step * k2, k2);
            k4 = oriented_kernel_direction(net, x + step * k3, k3);
        } catch (const SingularPointError&) {
            half.stop = TraceStop::Singular;
            return half;
        }
        const Vec2 next = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (region != nullptr && !region->contains(next)) {
            half.stop = TraceStop::LeftRegion;
            return half;
        }
        tangent = k4;
        x = next;
        half.points.push_back(x);
    }
    return half;
}

double output_at(const Network& net, const Vec2& x) {
    return forward(net, Vec(x))[1];
}

}  // namespace

LeafTrace trace_leaf(const Network& net, const Vec2& x0, double step, int n_steps,
                     TraceDirection direction, const Box2* region) {
    kernel_direction(net, x0);  // immediate singularity raises

    LeafTrace trace;
    trace.step = step;
    trace.direction = direction;

    if (direction == TraceDirection::Both) {
        HalfTrace back = integrate(net, x0, step, n_steps, -1.0, region);
        HalfTrace fwd = integrate(net, x0, step, n_steps, +1.0, region);
        trace.points.assign(back.points.rbegin(), back.points.rend());
        trace.points.insert(trace.points.end(), fwd.points.begin() + 1, fwd.points.end());
        trace.stop_reason = back.stop != TraceStop::Completed ? back.stop : fwd.stop;
    } else {
        const double sign = direction == TraceDirection::Forward ? +1.0 : -1.0;
        HalfTrace half = integrate(net, x0, step, n_steps, sign, region);
        trace.points = std::move(half.points);
        trace.stop_reason = half.stop;
    }

    const double p0 = output_at(net, x0);
    for (const Vec2& p : trace.points)
        trace.output_drift = std::max(trace.output_drift, std::abs(output_at(net, p) - p0));
    return trace;
}

double curvature_of_normal_field(const std::function<Vec2(const Vec2&)>& normal,
                                 const Vec2& x, const Vec2& dir, double dx) {
    const Vec2 n1 = normal(x);
    const Vec2 n2 = normal(x + dx * dir);
    const double cross = n1.x() * n2.y() - n1.y() * n2.x();
    return std::asin(std::clamp(cross, -1.0, 1.0));
}

double extrinsic_curvature(const Network& net, const Vec2& x, double dx) {
    const Vec2 dir = transverse_direction(net, x);
    return curvature_of_normal_field(
        [&net](const Vec2& p) { return transverse_direction(net, p); }, x, dir, dx);
}

CurvatureGrid curvature_grid(const Network& net, const Box2& region, int nx, int ny,
                             double dx) {
    if (nx < 2 || ny < 2) throw Error("curvature_grid: resolution must be at least 2x2");
    CurvatureGrid grid;
    grid.region = region;
    grid.nx = nx;
    grid.ny = ny;
    grid.dx = dx;
    grid.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    grid.singular.assign(static_cast<std::size_t>(nx) * ny, false);
    const Vec2 span = region.hi - region.lo;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const Vec2 center(region.lo.x() + (ix + 0.5) * span.x() / nx,
                              region.lo.y() + (iy + 0.5) * span.y() / ny);
            const std::size_t idx = static_cast<std::size_t>(iy) * nx + ix;
            try {
                grid.values[idx] = extrinsic_curvature(net, center, dx);
            } catch (const SingularPointError&) {
                grid.singular[idx] = true;
            }
        }
    }
    return grid;
}

}  // namespace curvattack
