// SPDX-License-Identifier: Apache-2.0
//
// mimo-recon: MIMO channel correlation reconstruction and simulation library
// Copyright (C) 2026 The mimo-recon authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMO_RECON_MATCORE_HPP
#define MIMO_RECON_MATCORE_HPP

// Dense complex matrix kernel. Every matrix in this library is small (at most a
// few dozen rows), so storage is dense row-major and the eigen/SVD routines
// favour robustness over speed.

#include "mimo_recon/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

namespace mimo_recon
{

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tolerance
{
inline constexpr double hermitian = 1e-10;     // relative to the largest entry
inline constexpr double unit_diagonal = 1e-10;
inline constexpr double psd_floor = 1e-8;      // eigenvalues in [-floor, 0) count as zero
inline constexpr double not_psd = 1e-6;        // below -not_psd the input is rejected
} // namespace tolerance

inline bool all_finite(const ComplexMatrix &a)
{
    return a.allFinite();
}

inline double max_abs_entry(const ComplexMatrix &a)
{
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix &a, double rel_tol = tolerance::hermitian)
{
    if (a.rows() != a.cols())
        return false;
    const double scale = std::max(1.0, max_abs_entry(a));
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix &a)
{
    return (a + a.adjoint()) * 0.5;
}

/// Kronecker product: entry [p*b.rows()+q, r*b.cols()+s] = a[p,r] * b[q,s].
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b)
{
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index p = 0; p < a.rows(); ++p)
        for (Index r = 0; r < a.cols(); ++r)
            out.block(p * b.rows(), r * b.cols(), b.rows(), b.cols()) = a(p, r) * b;
    return out;
}

/// Column-wise vectorization: vec(a)[j*rows + i] = a[i,j].
inline ComplexVector vec(const ComplexMatrix &a)
{
    ComplexVector v(a.size());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            v[j * a.rows() + i] = a(i, j);
    return v;
}

inline ComplexMatrix unvec(const ComplexVector &v, Index rows, Index cols)
{
    if (v.size() != rows * cols)
        throw DimensionError("unvec: vector length " + std::to_string(v.size()) + " does not match " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    ComplexMatrix a(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            a(i, j) = v[j * rows + i];
    return a;
}

inline double fro_norm(const ComplexMatrix &a)
{
    return a.norm();
}

inline cplx trace(const ComplexMatrix &a)
{
    if (a.rows() != a.cols())
        throw DimensionError("trace of a non-square matrix");
    return a.trace();
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline RealVector herm_eigvals(const ComplexMatrix &r)
{
    if (!is_hermitian(r))
        throw std::invalid_argument("herm_eigvals: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(hermitian_part(r)), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("herm_eigvals: eigensolver did not converge");
    return es.eigenvalues();
}

/// Singular values, descending.
inline RealVector singular_values(const ComplexMatrix &a)
{
    if (!all_finite(a))
        throw std::invalid_argument("singular_values: non-finite input");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues();
}

/// Hermitian positive-semidefinite matrix. Construction validates the
/// invariants once; the stored matrix is exactly Hermitian afterwards.
class CovarianceMatrix
{
public:
    static CovarianceMatrix from(const ComplexMatrix &m)
    {
        return CovarianceMatrix(validated(m));
    }

    const ComplexMatrix &matrix() const noexcept { return m_; }
    Index dim() const noexcept { return m_.rows(); }
    cplx operator()(Index i, Index j) const { return m_(i, j); }

protected:
    explicit CovarianceMatrix(ComplexMatrix m) : m_(std::move(m)) {}

    static ComplexMatrix validated(const ComplexMatrix &m)
    {
        if (m.rows() != m.cols() || m.rows() == 0)
            throw DimensionError("covariance matrix must be square and nonempty");
        if (!all_finite(m))
            throw std::invalid_argument("covariance matrix has non-finite entries");
        if (!is_hermitian(m))
            throw std::invalid_argument("covariance matrix is not Hermitian");
        ComplexMatrix h = hermitian_part(m);
        const RealVector ev = herm_eigvals(h);
        const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
        if (ev.minCoeff() < -tolerance::psd_floor * scale)
            throw NotPsdError("covariance matrix is not positive semidefinite", ev.minCoeff());
        return h;
    }

    ComplexMatrix m_;
};

/// Covariance with unit diagonal.
class CorrelationMatrix : public CovarianceMatrix
{
public:
    static CorrelationMatrix from(const ComplexMatrix &m)
    {
        ComplexMatrix h = validated(m);
        for (Index i = 0; i < h.rows(); ++i)
        {
            if (std::abs(h(i, i) - 1.0) > tolerance::unit_diagonal)
                throw std::invalid_argument("correlation matrix diagonal entry " + std::to_string(i) + " is not 1");
            h(i, i) = 1.0;
        }
        return CorrelationMatrix(std::move(h));
    }

    /// Rescales a covariance by the geometric mean of branch powers so the
    /// diagonal is exactly one.
    static CorrelationMatrix from_covariance(const ComplexMatrix &cov)
    {
        if (cov.rows() != cov.cols() || cov.rows() == 0)
            throw DimensionError("covariance matrix must be square and nonempty");
        ComplexMatrix h = hermitian_part(cov);
        RealVector inv_sd(h.rows());
        for (Index i = 0; i < h.rows(); ++i)
        {
            const double p = h(i, i).real();
            if (!(p > 0.0))
                throw NumericalError("branch " + std::to_string(i) + " has zero power; correlation undefined");
            inv_sd[i] = 1.0 / std::sqrt(p);
        }
        for (Index i = 0; i < h.rows(); ++i)
            for (Index j = 0; j < h.cols(); ++j)
                h(i, j) *= inv_sd[i] * inv_sd[j];
        for (Index i = 0; i < h.rows(); ++i)
            h(i, i) = 1.0;
        return from(h);
    }

    static CorrelationMatrix identity(Index n)
    {
        return CorrelationMatrix(ComplexMatrix::Identity(n, n));
    }

private:
    explicit CorrelationMatrix(ComplexMatrix m) : CovarianceMatrix(std::move(m)) {}
};

/// Lower-triangular square root L with L*L^H = r. Positive-definite input goes
/// through a plain Cholesky factorization. Semidefinite input (eigenvalues in
/// [-1e-8, 0) are clamped to zero) is factored through the eigendecomposition
/// square root and re-triangularized with a QR step.
inline ComplexMatrix chol_sqrt(const ComplexMatrix &r)
{
    if (!is_hermitian(r))
        throw std::invalid_argument("chol_sqrt: input is not Hermitian");
    const Eigen::MatrixXcd h = hermitian_part(r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("chol_sqrt: eigensolver did not converge");
    const RealVector &ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev.minCoeff() < -tolerance::not_psd * scale)
        throw NotPsdError("chol_sqrt: matrix is not positive semidefinite", ev.minCoeff());

    if (ev.minCoeff() > 0.0)
    {
        Eigen::LLT<Eigen::MatrixXcd> llt(h);
        if (llt.info() == Eigen::Success)
            return ComplexMatrix(llt.matrixL());
    }

    const Index n = h.rows();
    RealVector root = ev.cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd s = es.eigenvectors() * root.asDiagonal();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(s.adjoint());
    Eigen::MatrixXcd upper = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i)
    {
        const double mag = std::abs(upper(i, i));
        if (mag > 0.0)
            upper.row(i) *= std::conj(upper(i, i)) / mag;
    }
    return ComplexMatrix(upper.adjoint());
}

inline ComplexMatrix chol_sqrt(const CovarianceMatrix &r)
{
    return chol_sqrt(r.matrix());
}

} // namespace mimo_recon

#endif
