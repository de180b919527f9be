#pragma once

#include <optional>

#include "curvattack/network.hpp"
#include "curvattack/types.hpp"

namespace curvattack {

/// Relative eigenvalue tolerance separating the genuine spectrum from
/// round-off in f64 pullbacks.
inline constexpr double kDefaultRankTol = 1e-9;

/// Fisher information of a Bernoulli output: 1/(p(1-p)), >= 4.
double output_fim_bernoulli(double p);

/// Fisher information of a categorical output, diag(1/p_c).
Mat output_fim_categorical(const Vec& p);

/// Pullback of the output Fisher metric to input space, G_x = J^T G_p J.
/// Symmetric PSD with rank bounded by C-1. The full spectral decomposition is
/// computed lazily and cached; the top eigenpair has a fast path through the
/// C x C Gram matrix of the scaled Jacobian.
class PullbackMetric {
public:
    PullbackMetric(Mat g, Mat scaled_jacobian, Vec base_point);

    /// Defers assembling the n x n matrix until matrix() is called; attacks
    /// only need the scaled Jacobian.
    static PullbackMetric from_scaled_jacobian(Mat scaled_jacobian, Vec base_point);

    const Mat& matrix() const;
    const Vec& base_point() const { return base_point_; }
    Eigen::Index dim() const { return base_point_.size(); }

    /// Scaled Jacobian A with G = A^T A (A = sqrt(G_p) J).
    const Mat& scaled_jacobian() const { return scaled_jac_; }

    /// Eigenvalues in descending order, negative round-off clipped to 0.
    const Vec& eigenvalues() const;
    /// Orthonormal eigenvector columns, paired with eigenvalues().
    const Mat& eigenvectors() const;

private:
    PullbackMetric() = default;
    void ensure_spectrum() const;

    mutable Mat g_;
    Mat scaled_jac_;
    Vec base_point_;
    mutable std::optional<Vec> eigenvalues_;
    mutable std::optional<Mat> eigenvectors_;
};

/// Top eigenpair of the pullback metric; the attack direction basis.
struct SpectralAttackBasis {
    double top_eigenvalue = 0.0;
    Vec top_eigenvector;
    /// Set when the metric is (numerically) zero and no direction exists.
    bool degenerate = false;
};

PullbackMetric pullback_metric(const Network& net, const Vec& x);

/// Largest eigenpair with unit Euclidean eigenvector, first nonzero component
/// made positive. Computed through the small Gram matrix A A^T, exact for the
/// nonzero spectrum of G = A^T A.
SpectralAttackBasis top_eigenpair(const PullbackMetric& g);

/// Number of eigenvalues above tau_rank * lambda_max (0 for the zero metric).
int metric_rank(const PullbackMetric& g, double tau_rank = kDefaultRankTol);

/// Orthonormal eigenvectors spanning ker G at the given relative tolerance.
Mat kernel_basis(const PullbackMetric& g, double tau_rank = kDefaultRankTol);

}  // namespace curvattack
