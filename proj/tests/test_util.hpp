#pragma once

#include <cmath>
#include <random>

#include "curvattack/data_io.hpp"
#include "curvattack/network.hpp"

namespace curvattack::testing {

/// Small random network with nonzero biases, for oracle-based checks.
inline Network random_net(std::uint64_t seed, const std::vector<int>& widths,
                          Activation act = Activation::Sigmoid,
                          OutputHead head = OutputHead::Bernoulli) {
    Network net = make_mlp(widths, act, head, seed);
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    for (auto& layer : net.layers)
        for (Eigen::Index i = 0; i < layer.b.size(); ++i) layer.b[i] = dist(rng);
    return net;
}

inline Vec random_point(std::uint64_t seed, int dim) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x[i] = dist(rng);
    return x;
}

inline Vec random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec u(dim);
    do {
        for (int i = 0; i < dim; ++i) u[i] = gauss(rng);
    } while (u.norm() == 0.0);
    return u / u.norm();
}

/// Central finite-difference Jacobian of the forward probabilities.
/// Independent oracle for input_jacobian; for a Bernoulli head only the
/// class-1 row is returned to match the analytic convention.
inline Mat fd_jacobian(const Network& net, const Vec& x, double h = 1e-4) {
    const int rows = net.head == OutputHead::Bernoulli ? 1 : net.num_classes();
    Mat jac(rows, x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const Vec pp = forward(net, xp);
        const Vec pm = forward(net, xm);
        if (net.head == OutputHead::Bernoulli) {
            jac(0, j) = (pp[1] - pm[1]) / (2.0 * h);
        } else {
            for (int c = 0; c < rows; ++c) jac(c, j) = (pp[c] - pm[c]) / (2.0 * h);
        }
    }
    return jac;
}

/// Brute-force Fisher expectation: sum over the discrete outcomes y of
/// p(y) grad(ln p(y)) grad(ln p(y))^T. Enumerates the expectation explicitly
/// instead of using the closed-form pullback assembly.
inline Mat enumeration_fisher(const Network& net, const Vec& x) {
    const Vec p = forward(net, x);
    const Mat jac = input_jacobian(net, x);
    Mat g = Mat::Zero(x.size(), x.size());
    for (int y = 0; y < net.num_classes(); ++y) {
        // grad ln p(y) = grad p(y) / p(y); Bernoulli class 0 has grad -dp/dx.
        Vec grad_py;
        if (net.head == OutputHead::Bernoulli)
            grad_py = (y == 1 ? 1.0 : -1.0) * jac.row(0).transpose();
        else
            grad_py = jac.row(y).transpose();
        const Vec grad_ln = grad_py / p[y];
        g += p[y] * grad_ln * grad_ln.transpose();
    }
    return g;
}

/// XOR net trained the way the toy experiments do: 8 sigmoid hidden neurons
/// on random labelled points of the unit square. Cached per process.
inline const Network& trained_xor_net() {
    static const Network net = [] {
        Network n = make_mlp({2, 8, 1}, Activation::Sigmoid, OutputHead::Bernoulli, 2);
        TrainConfig cfg;
        cfg.learning_rate = 0.5;
        cfg.epochs = 800;
        cfg.batch_size = 16;
        cfg.seed = 2;
        return train(std::move(n), xor_region_dataset(1000, 2), cfg);
    }();
    return net;
}

/// XOR net trained on just the four corners, for the convergence contract.
inline const Network& corner_xor_net() {
    static const Network net = [] {
        Network n = make_mlp({2, 8, 1}, Activation::Sigmoid, OutputHead::Bernoulli, 7);
        TrainConfig cfg;
        cfg.learning_rate = 0.5;
        cfg.epochs = 4000;
        cfg.batch_size = 4;
        cfg.seed = 7;
        return train(std::move(n), xor_dataset(), cfg);
    }();
    return net;
}

}  // namespace curvattack::testing
