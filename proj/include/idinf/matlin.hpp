#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace idinf {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Numerical thresholds shared by every stage of the pipeline.
///
/// `rank_rel` is scaled by max(rows, cols) when a rank decision is made, so the
/// effective singular-value cutoff for an m x n matrix is
/// rank_rel * max(m, n) * sigma_max.
struct TolerancePolicy {
    double rank_rel = 1e-9;
    double root_rel = 1e-6;
    double residual_rel = 1e-8;

    /// Throws Error(InvalidInput) unless all three lie in (0, 1).
    void validate() const;

    double rank_threshold(Index rows, Index cols) const;
};

/// Throws Error(InvalidMatrix) naming `what` if any entry is NaN or infinite.
void require_finite(const RealMatrix& m, std::string_view what);

template <typename Scalar>
struct SvdResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> U;  // empty unless requested
    RealVector singular_values;                                // descending
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> V;
};

/// Two-sided Jacobi SVD (QR preconditioned). Eigen 3.4's divide-and-conquer
/// BDCSVD is avoided: on clustered spectra it returns inaccurate singular
/// vectors, or NaNs. `options` takes Eigen::Compute{Full,Thin}{U,V}.
SvdResult<double> svd(const RealMatrix& m, unsigned int options);
SvdResult<Complex> svd(const ComplexMatrix& m, unsigned int options);

template <typename Scalar>
struct NullspaceResult {
    Index rank = 0;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> basis;  // orthonormal columns
};

/// Orthonormal kernel basis from a full SVD. Singular values at or below
/// rank_threshold * reference count as zero; a non-positive reference means
/// "use the largest singular value of m".
NullspaceResult<double> nullspace(const RealMatrix& m, const TolerancePolicy& tol,
                                  double reference = 0.0);
NullspaceResult<Complex> nullspace(const ComplexMatrix& m, const TolerancePolicy& tol,
                                   double reference = 0.0);

/// Orthonormal basis of the column space of m (numerical rank by tol).
RealMatrix orthonormal_range(const RealMatrix& m, const TolerancePolicy& tol);
ComplexMatrix orthonormal_range(const ComplexMatrix& m, const TolerancePolicy& tol);

RealMatrix inverse(const RealMatrix& m, const TolerancePolicy& tol);

template <typename Scalar>
struct LeastNormSolution {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
    double residual = 0.0;  // ||M x - y||
};

LeastNormSolution<double> least_norm_solve(const RealMatrix& m, const RealVector& y,
                                           const TolerancePolicy& tol);
LeastNormSolution<Complex> least_norm_solve(const ComplexMatrix& m, const ComplexVector& y,
                                            const TolerancePolicy& tol);

/// 2-norm condition number; +infinity for a singular matrix.
double condition_number(const RealMatrix& m);

double spectral_norm(const RealMatrix& m);
double spectral_norm(const ComplexMatrix& m);

/// Block-diagonal concatenation; an empty list gives a 0x0 matrix.
RealMatrix block_diagonal(const std::vector<RealMatrix>& blocks);

}  // namespace idinf
