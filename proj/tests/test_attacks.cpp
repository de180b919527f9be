#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "curvattack/attacks.hpp"
#include "curvattack/foliation2d.hpp"
#include "test_util.hpp"

using namespace curvattack;
using namespace curvattack::testing;

TEST_CASE("choose_sign: picks the side that lowers the original class probability") {
    const Network& net = trained_xor_net();
    const Vec x = Vec2(0.25, 0.25);
    SpectralAttackBasis basis = top_eigenpair(pullback_metric(net, x));
    REQUIRE_FALSE(basis.degenerate);
    const int orig = predict_class(net, x);
    const Vec chosen = choose_sign(net, x, basis.top_eigenvector, 0.1);
    CHECK(forward(net, x + chosen)[orig] <= forward(net, x - chosen)[orig]);
}

TEST_CASE("choose_sign: exact tie goes to plus") {
    Network net;
    net.head = OutputHead::Bernoulli;
    net.layers.push_back({Mat::Zero(1, 2), Vec::Zero(1), Activation::Sigmoid});
    Vec v = Vec2(1, 0);
    const Vec chosen = choose_sign(net, Vec2(0, 0), v, 0.5);
    CHECK(chosen == Vec(0.5 * v));
}

TEST_CASE("ossa: linear logit model attacks along the gradient direction") {
    Network net;
    net.head = OutputHead::Bernoulli;
    Mat w(1, 2);
    w << 2.0, -1.0;
    net.layers.push_back({w, Vec::Zero(1), Activation::Sigmoid});
    AttackResult r = ossa(net, Vec2(0.1, 0.2), 0.05);
    const Vec2 dir = Vec2(r.total).normalized();
    const Vec2 grad = Vec2(2.0, -1.0).normalized();
    CHECK(std::abs(std::abs(dir.dot(grad)) - 1.0) < 1e-12);
    CHECK(r.total.norm() == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("ossa: zero metric raises") {
    Network net;
    net.head = OutputHead::Bernoulli;
    net.layers.push_back({Mat::Zero(1, 2), Vec::Zero(1), Activation::Sigmoid});
    CHECK_THROWS_AS(ossa(net, Vec2(0.5, 0.5), 0.1), ZeroMetricError);
}

TEST_CASE("ossa: direction maximizes the quadratic form") {
    const Network& net = trained_xor_net();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    int tested = 0;
    while (tested < 20) {
        const Vec x = Vec2(u(rng), u(rng));
        PullbackMetric g = pullback_metric(net, x);
        SpectralAttackBasis basis = top_eigenpair(g);
        if (basis.degenerate) continue;
        const double best = basis.top_eigenvector.dot(g.matrix() * basis.top_eigenvector);
        for (int i = 0; i < 10000; ++i) {
            const Vec v = random_unit(rng, 2);
            CHECK(v.dot(g.matrix() * v) <= best + 1e-9);
        }
        ++tested;
    }
}

TEST_CASE("ossa: norm contract and fooling-rate sanity on the square") {
    const Network& net = trained_xor_net();
    PointPopulation pop = sample_uniform({Vec2(0, 0), Vec2(1, 1)}, 500, 21);
    int fooled = 0;
    for (const Vec2& p : pop.points) {
        AttackResult r = ossa(net, Vec(p), 0.3);
        CHECK(r.total.norm() == doctest::Approx(0.3).epsilon(1e-9));
        if (r.fooled) ++fooled;
    }
    const double rate = fooled / 500.0;
    CHECK(rate > 0.0);
    CHECK(rate <= 1.0);
}

TEST_CASE("tssa: norm contracts") {
    const Network& net = trained_xor_net();
    AttackBudget budget{0.1, 0.6};
    PointPopulation pop = sample_uniform({Vec2(0, 0), Vec2(1, 1)}, 100, 5);
    for (const Vec2& p : pop.points) {
        AttackResult r = tssa(net, Vec(p), budget);
        if (r.fallback_to_ossa) continue;
        REQUIRE(r.steps.size() == 2);
        CHECK(r.steps[0].norm() == doctest::Approx(0.06).epsilon(1e-9));
        CHECK(r.steps[1].norm() == doctest::Approx(0.04).epsilon(1e-9));
        CHECK(r.total.norm() <= 0.1 + 1e-9);
    }
}

TEST_CASE("tssa: constant metric field gives collinear steps and full budget") {
    // single linear layer + sigmoid: logit gradient is constant, so the top
    // eigenvector is the same at x and x+v
    Network net;
    net.head = OutputHead::Bernoulli;
    Mat w(1, 2);
    w << 1.0, 0.5;
    net.layers.push_back({w, Vec::Zero(1), Activation::Sigmoid});
    AttackResult r = tssa(net, Vec2(0.3, -0.2), AttackBudget{0.2, 0.6});
    REQUIRE(r.steps.size() == 2);
    const double cosine = r.steps[0].normalized().dot(r.steps[1].normalized());
    CHECK(cosine == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.total.norm() == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("tssa: split near 1 approaches the ossa vector") {
    const Network& net = trained_xor_net();
    const Vec x = Vec2(0.3, 0.4);
    AttackResult two = tssa(net, x, AttackBudget{0.1, 0.999});
    AttackResult one = ossa(net, x, 0.0999);
    CHECK((two.steps[0] - one.total).norm() < 1e-6);
    CHECK(two.steps[1].norm() == doctest::Approx(0.0001).epsilon(1e-6));
}

TEST_CASE("tssa: zero metric at the intermediate point falls back to ossa") {
    // relu shelf: x > 0 region has gradient, x < 0 is flat
    Network net;
    net.head = OutputHead::Bernoulli;
    Mat w1(1, 2);
    w1 << 1.0, 0.0;
    Mat w2(1, 1);
    w2 << 1.0;
    net.layers.push_back({w1, Vec::Zero(1), Activation::Relu});
    net.layers.push_back({w2, Vec::Zero(1), Activation::Sigmoid});
    // at x = (0.05, 0), a first step of 0.06 crosses into the flat region
    AttackResult r = tssa(net, Vec2(0.05, 0.0), AttackBudget{0.1, 0.6});
    CHECK(r.fallback_to_ossa);
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].norm() == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("tssa_rot2d: energy split and rotation behavior") {
    const Network& net = trained_xor_net();
    AttackBudget budget{0.1, 0.6};
    AttackResult r = tssa_rot2d(net, Vec2(0.45, 0.52), budget);
    REQUIRE(r.steps.size() == 2);
    const double v2 = r.steps[0].squaredNorm();
    const double w2 = r.steps[1].squaredNorm();
    CHECK(v2 + w2 == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(r.steps[0].norm() == doctest::Approx(0.06).epsilon(1e-9));
}

TEST_CASE("tssa_rot2d: rejects non-2D inputs") {
    Network net = random_net(0, {3, 4, 1});
    CHECK_THROWS_AS(tssa_rot2d(net, Vec::Ones(3), AttackBudget{0.1, 0.6}),
                    DimensionError);
}

TEST_CASE("tssa_rot2d: curvature larger near the center than near the corner") {
    const Network& net = trained_xor_net();
    auto region_mean = [&net](double lo, double hi) {
        double total = 0.0;
        int count = 0;
        for (int i = 0; i < 10; ++i) {
            for (int j = 0; j < 10; ++j) {
                const Vec2 x(lo + (i + 0.5) * (hi - lo) / 10,
                             lo + (j + 0.5) * (hi - lo) / 10);
                try {
                    total += std::abs(extrinsic_curvature(net, x));
                    ++count;
                } catch (const SingularPointError&) {
                }
            }
        }
        REQUIRE(count > 0);
        return total / count;
    };
    CHECK(region_mean(0.4, 0.6) > region_mean(0.0, 0.2));
}

TEST_CASE("kl_divergence: identities") {
    const Network& net = trained_xor_net();
    const Vec x = Vec2(0.3, 0.6);
    CHECK(kl_divergence(net, x, x) == 0.0);
    CHECK(kl_divergence(net, x, Vec2(0.7, 0.1)) >= 0.0);
}

TEST_CASE("kl_divergence: second-order model error decays super-quadratically") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    const Network& net = trained_xor_net();
    int tested = 0;
    while (tested < 20) {
        const Vec x = Vec2(u(rng), u(rng));
        PullbackMetric g = pullback_metric(net, x);
        if (top_eigenpair(g).degenerate) continue;
        const Vec dir = random_unit(rng, 2);
        double prev_err = -1.0;
        bool ok = true;
        for (double t = 1e-2; t > 1e-2 / 8.0; t /= 2.0) {
            const Vec v = t * dir;
            const double quad = 0.5 * v.dot(g.matrix() * v);
            const double err = std::abs(kl_divergence(net, x, x + v) - quad);
            if (prev_err >= 0.0 && prev_err > 1e-15) {
                // halving t must shrink the error by more than the quadratic
                // factor 1/4; threshold 0.3 leaves numerical slack
                ok = ok && (err / prev_err < 0.3);
            }
            prev_err = err;
        }
        CHECK(ok);
        ++tested;
    }
}
