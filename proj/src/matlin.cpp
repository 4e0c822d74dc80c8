#include "idinf/matlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "idinf/error.hpp"

namespace idinf {

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Derived>
void check_finite(const Eigen::MatrixBase<Derived>& m, std::string_view what) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::InvalidMatrix, std::string(what) + " has non-finite entries");
    }
}

template <typename Scalar>
SvdResult<Scalar> svd_impl(const Mat<Scalar>& m, unsigned int options) {
    const Eigen::JacobiSVD<Mat<Scalar>> dec(m, options);
    SvdResult<Scalar> out;
    out.singular_values = dec.singularValues();
    if (dec.computeU()) out.U = dec.matrixU();
    if (dec.computeV()) out.V = dec.matrixV();
    if (!out.singular_values.allFinite() || !out.U.allFinite() || !out.V.allFinite()) {
        throw Error(ErrorCode::NumericalFailure, "SVD produced non-finite output");
    }
    return out;
}

template <typename Scalar>
NullspaceResult<Scalar> nullspace_impl(const Mat<Scalar>& m, const TolerancePolicy& tol,
                                       double reference) {
    check_finite(m, "nullspace input");
    NullspaceResult<Scalar> out;
    const Index cols = m.cols();
    if (m.rows() == 0 || cols == 0) {
        out.basis = Mat<Scalar>::Identity(cols, cols);
        return out;
    }
    const auto dec = svd_impl(m, Eigen::ComputeFullV);
    const auto& sv = dec.singular_values;
    const double ref = reference > 0.0 ? reference : (sv.size() > 0 ? sv(0) : 0.0);
    const double cut = tol.rank_threshold(m.rows(), cols) * ref;
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) ++rank;
    }
    out.rank = rank;
    out.basis = dec.V.rightCols(cols - rank);
    return out;
}

template <typename Scalar>
Mat<Scalar> range_impl(const Mat<Scalar>& m, const TolerancePolicy& tol) {
    check_finite(m, "range input");
    if (m.rows() == 0 || m.cols() == 0) return Mat<Scalar>(m.rows(), 0);
    const auto dec = svd_impl(m, Eigen::ComputeThinU);
    const auto& sv = dec.singular_values;
    const double cut = tol.rank_threshold(m.rows(), m.cols()) * sv(0);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) ++rank;
    }
    return dec.U.leftCols(rank);
}

template <typename Scalar>
LeastNormSolution<Scalar> least_norm_impl(const Mat<Scalar>& m, const Vec<Scalar>& y,
                                          const TolerancePolicy& tol) {
    if (y.size() != m.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "least_norm_solve: right-hand side length " +
                                                      std::to_string(y.size()) + " != rows " +
                                                      std::to_string(m.rows()));
    }
    check_finite(m, "least_norm_solve matrix");
    LeastNormSolution<Scalar> out;
    out.x = Vec<Scalar>::Zero(m.cols());
    if (m.rows() == 0 || m.cols() == 0) {
        out.residual = y.norm();
        return out;
    }
    const auto dec = svd_impl(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = dec.singular_values;
    const double cut = tol.rank_threshold(m.rows(), m.cols()) * sv(0);
    Vec<Scalar> uty = dec.U.adjoint() * y;
    for (Index i = 0; i < sv.size(); ++i) {
        uty(i) = sv(i) > cut ? uty(i) / sv(i) : Scalar(0);
    }
    out.x = dec.V * uty;
    out.residual = (m * out.x - y).norm();
    return out;
}

}  // namespace

SvdResult<double> svd(const RealMatrix& m, unsigned int options) { return svd_impl<double>(m, options); }
SvdResult<Complex> svd(const ComplexMatrix& m, unsigned int options) { return svd_impl<Complex>(m, options); }

void TolerancePolicy::validate() const {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; };
    if (!ok(rank_rel) || !ok(root_rel) || !ok(residual_rel)) {
        throw Error(ErrorCode::InvalidInput, "tolerances must lie strictly between 0 and 1");
    }
}

double TolerancePolicy::rank_threshold(Index rows, Index cols) const {
    return rank_rel * static_cast<double>(std::max<Index>({rows, cols, 1}));
}

void require_finite(const RealMatrix& m, std::string_view what) { check_finite(m, what); }

NullspaceResult<double> nullspace(const RealMatrix& m, const TolerancePolicy& tol,
                                  double reference) {
    return nullspace_impl<double>(m, tol, reference);
}

NullspaceResult<Complex> nullspace(const ComplexMatrix& m, const TolerancePolicy& tol,
                                   double reference) {
    return nullspace_impl<Complex>(m, tol, reference);
}

RealMatrix orthonormal_range(const RealMatrix& m, const TolerancePolicy& tol) {
    return range_impl<double>(m, tol);
}

ComplexMatrix orthonormal_range(const ComplexMatrix& m, const TolerancePolicy& tol) {
    return range_impl<Complex>(m, tol);
}

RealMatrix inverse(const RealMatrix& m, const TolerancePolicy& tol) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
    }
    check_finite(m, "inverse input");
    if (m.rows() == 0) return m;
    Eigen::JacobiSVD<RealMatrix> svd(m);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > tol.rank_threshold(m.rows(), m.cols()) * sv(0))) {
        throw Error(ErrorCode::SingularMatrix,
                    "matrix is numerically singular (sigma_min/sigma_max = " +
                        std::to_string(sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0) + ")");
    }
    return m.partialPivLu().inverse();
}

LeastNormSolution<double> least_norm_solve(const RealMatrix& m, const RealVector& y,
                                           const TolerancePolicy& tol) {
    return least_norm_impl<double>(m, y, tol);
}

LeastNormSolution<Complex> least_norm_solve(const ComplexMatrix& m, const ComplexVector& y,
                                            const TolerancePolicy& tol) {
    return least_norm_impl<Complex>(m, y, tol);
}

double condition_number(const RealMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 1.0;
    Eigen::JacobiSVD<RealMatrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    return smin == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / smin;
}

double spectral_norm(const RealMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<RealMatrix> svd(m);
    return svd.singularValues()(0);
}

double spectral_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

RealMatrix block_diagonal(const std::vector<RealMatrix>& blocks) {
    Index rows = 0;
    Index cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    RealMatrix out = RealMatrix::Zero(rows, cols);
    Index r = 0;
    Index c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

}  // namespace idinf
