#include "curvattack/fim.hpp"

#include <cmath>

namespace curvattack {

double output_fim_bernoulli(double p) {
    p = clamp_prob(p);
    return 1.0 / (p * (1.0 - p));
}

Mat output_fim_categorical(const Vec& p) {
    Mat g = Mat::Zero(p.size(), p.size());
    for (Eigen::Index c = 0; c < p.size(); ++c) g(c, c) = 1.0 / clamp_prob(p[c]);
    return g;
}

PullbackMetric::PullbackMetric(Mat g, Mat scaled_jacobian, Vec base_point)
    : g_(std::move(g)), scaled_jac_(std::move(scaled_jacobian)),
      base_point_(std::move(base_point)) {
    // Kill asymmetric round-off before any eigensolve.
    g_ = 0.5 * (g_ + g_.transpose()).eval();
}

PullbackMetric PullbackMetric::from_scaled_jacobian(Mat scaled_jacobian, Vec base_point) {
    PullbackMetric g;
    g.scaled_jac_ = std::move(scaled_jacobian);
    g.base_point_ = std::move(base_point);
    return g;
}

const Mat& PullbackMetric::matrix() const {
    if (g_.size() == 0 && scaled_jac_.size() != 0) {
        g_ = scaled_jac_.transpose() * scaled_jac_;
        g_ = 0.5 * (g_ + g_.transpose()).eval();
    }
    return g_;
}

void PullbackMetric::ensure_spectrum() const {
    if (eigenvalues_) return;
    Eigen::SelfAdjointEigenSolver<Mat> solver(matrix());
    Vec evals = solver.eigenvalues();
    Mat evecs = solver.eigenvectors();
    // Eigen returns ascending order; flip to descending and clip negative
    // round-off to zero.
    const Eigen::Index n = evals.size();
    Vec vals(n);
    Mat vecs(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        vals[i] = std::max(0.0, evals[n - 1 - i]);
        vecs.col(i) = evecs.col(n - 1 - i);
    }
    eigenvalues_ = std::move(vals);
    eigenvectors_ = std::move(vecs);
}

const Vec& PullbackMetric::eigenvalues() const {
    ensure_spectrum();
    return *eigenvalues_;
}

const Mat& PullbackMetric::eigenvectors() const {
    ensure_spectrum();
    return *eigenvectors_;
}

PullbackMetric pullback_metric(const Network& net, const Vec& x) {
    Mat jac = input_jacobian(net, x);
    Mat scaled;
    if (net.head == OutputHead::Bernoulli) {
        const double p = forward(net, x)[1];
        scaled = std::sqrt(output_fim_bernoulli(p)) * jac;  // 1 x n
    } else {
        Vec p = forward(net, x);
        scaled = Mat(jac.rows(), jac.cols());
        for (Eigen::Index c = 0; c < jac.rows(); ++c)
            scaled.row(c) = jac.row(c) / std::sqrt(clamp_prob(p[c]));
    }
    return PullbackMetric::from_scaled_jacobian(std::move(scaled), x);
}

namespace {

void orient_first_nonzero_positive(Vec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

}  // namespace

SpectralAttackBasis top_eigenpair(const PullbackMetric& g) {
    SpectralAttackBasis basis;
    const Mat& a = g.scaled_jacobian();
    if (a.size() != 0 && a.rows() < a.cols()) {
        // Nonzero spectrum of G = A^T A equals that of the C x C matrix A A^T.
        Eigen::SelfAdjointEigenSolver<Mat> solver(a * a.transpose());
        const Eigen::Index last = solver.eigenvalues().size() - 1;
        const double lambda = solver.eigenvalues()[last];
        Vec v = a.transpose() * solver.eigenvectors().col(last);
        const double norm = v.norm();
        if (lambda <= 0.0 || norm == 0.0) {
            basis.degenerate = true;
            basis.top_eigenvector = Vec::Zero(g.dim());
            return basis;
        }
        basis.top_eigenvalue = lambda;
        basis.top_eigenvector = v / norm;
    } else {
        const double lambda = g.eigenvalues()[0];
        if (lambda <= 0.0) {
            basis.degenerate = true;
            basis.top_eigenvector = Vec::Zero(g.dim());
            return basis;
        }
        basis.top_eigenvalue = lambda;
        basis.top_eigenvector = g.eigenvectors().col(0);
    }
    orient_first_nonzero_positive(basis.top_eigenvector);
    return basis;
}

int metric_rank(const PullbackMetric& g, double tau_rank) {
    const Vec& evals = g.eigenvalues();
    const double lambda_max = evals[0];
    if (lambda_max <= 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals[i] > tau_rank * lambda_max) ++rank;
    return rank;
}

Mat kernel_basis(const PullbackMetric& g, double tau_rank) {
    const int rank = metric_rank(g, tau_rank);
    return g.eigenvectors().rightCols(g.dim() - rank);
}

}  // namespace curvattack
