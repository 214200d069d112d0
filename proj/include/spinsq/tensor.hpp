#pragma once

// Dense complex linear algebra for the 3- and 9-dimensional spaces used
// throughout the library. Storage is Eigen's dynamic complex matrix; the
// functions here add the contracts (tags, dimension checks) the rest of the
// code relies on.

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "spinsq/errors.hpp"

namespace spinsq {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTagTol = 1e-12;
inline constexpr double kCompareTol = 1e-10;
inline constexpr cplx kI{0.0, 1.0};

enum class Symmetry { Hermitian, AntiHermitian };

inline const char* to_string(Symmetry s) {
    return s == Symmetry::Hermitian ? "hermitian" : "anti_hermitian";
}

/// max |A[i][j] - conj(A[j][i])|
inline double hermitian_defect(const CMatrix& a) {
    if (a.rows() != a.cols()) return INFINITY;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// max |A[i][j] + conj(A[j][i])|
inline double anti_hermitian_defect(const CMatrix& a) {
    if (a.rows() != a.cols()) return INFINITY;
    return (a + a.adjoint()).cwiseAbs().maxCoeff();
}

inline double tag_defect(const CMatrix& a, Symmetry s) {
    return s == Symmetry::Hermitian ? hermitian_defect(a) : anti_hermitian_defect(a);
}

inline void require_tag(const CMatrix& a, Symmetry s, double tol = kTagTol) {
    const double d = tag_defect(a, s);
    if (!(d <= tol))
        throw TagError(std::string("matrix is not ") + to_string(s) + " (defect " +
                       std::to_string(d) + ")");
}

inline CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

/// Kronecker product; entry [(i*b.rows + k), (j*b.cols + l)] = a[i][j] * b[k][l].
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// <psi|A|psi>. The state is used as given; callers normalize.
inline cplx expectation(const CVector& psi, const CMatrix& op) {
    if (op.rows() != op.cols())
        throw DimensionError("expectation: operator is not square");
    if (op.rows() != psi.size())
        throw DimensionError("expectation: operator dimension " + std::to_string(op.rows()) +
                             " does not match state dimension " + std::to_string(psi.size()));
    return psi.dot(op * psi);
}

inline double norm_squared(const CVector& psi) { return psi.squaredNorm(); }

/// Exact exponential of a (anti-)Hermitian matrix through its spectral
/// decomposition. The decomposition is computed once; any number of scales
/// can then be evaluated.
///
/// For a Hermitian g the eigenproblem is g itself and exp(s g) = V e^{s L} V^+.
/// For an anti-Hermitian g we diagonalize H = i g, so g = -i H and
/// exp(s g) = V e^{-i s L} V^+, which is unitary for real s.
class SpectralExponential {
public:
    SpectralExponential(const CMatrix& g, Symmetry kind) : kind_(kind) {
        if (g.rows() != g.cols()) throw DimensionError("matrix_exponential: non-square generator");
        require_tag(g, kind);
        CMatrix h = kind == Symmetry::Hermitian ? CMatrix(g) : CMatrix(kI * g);
        // symmetrize away round-off so the solver sees an exactly self-adjoint input
        h = 0.5 * (h + h.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
        if (es.info() != Eigen::Success) throw Error("matrix_exponential: eigensolver failed");
        vectors_ = es.eigenvectors();
        values_ = es.eigenvalues();
    }

    Symmetry kind() const { return kind_; }
    Eigen::Index dim() const { return vectors_.rows(); }

    CMatrix operator()(double scale) const {
        return vectors_ * phases(scale).asDiagonal() * vectors_.adjoint();
    }

    /// exp(scale g) psi without forming the full matrix.
    CVector apply(double scale, const CVector& psi) const {
        if (psi.size() != dim()) throw DimensionError("matrix_exponential: state dimension mismatch");
        CVector coeffs = vectors_.adjoint() * psi;
        return vectors_ * phases(scale).cwiseProduct(coeffs);
    }

private:
    CVector phases(double scale) const {
        CVector d(values_.size());
        for (Eigen::Index k = 0; k < values_.size(); ++k)
            d[k] = kind_ == Symmetry::Hermitian ? cplx(std::exp(scale * values_[k]), 0.0)
                                                : std::exp(-kI * (scale * values_[k]));
        return d;
    }

    Symmetry kind_;
    CMatrix vectors_;
    Eigen::VectorXd values_;
};

inline CMatrix matrix_exponential(const CMatrix& g, Symmetry kind, double scale) {
    return SpectralExponential(g, kind)(scale);
}

/// max-entry |U^+ U - I|
inline double unitarity_defect(const CMatrix& u) {
    return (u.adjoint() * u - identity(u.rows())).cwiseAbs().maxCoeff();
}

} // namespace spinsq
