// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The jcesd Authors
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

#include "jcesd/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace jcesd {

namespace {

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ShapeError(std::string(what) + ": expected a non-empty square matrix");
    }
}

// Relative eigenvalue threshold below which a Hermitian matrix is treated as rank deficient.
constexpr double kRankTol = 1e-12;

}  // namespace

CMatrix toeplitz_hermitian(const CVector& v) {
    const auto n = v.size();
    if (n == 0) {
        throw ShapeError("toeplitz_hermitian: empty coefficient vector");
    }
    if (std::abs(v(0).imag()) > 1e-12) {
        throw NumericError("toeplitz_hermitian: v[0] must be real (imaginary part " + std::to_string(v(0).imag()) +
                           ")");
    }
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = j >= i ? v(j - i) : std::conj(v(i - j));
        }
        m(i, i) = cplx(v(0).real(), 0.0);
    }
    return m;
}

double min_eigenvalue(const CMatrix& hermitian) {
    require_square(hermitian, "min_eigenvalue");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

CMatrix enforce_psd(const CMatrix& hermitian) {
    require_square(hermitian, "enforce_psd");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian);
    if (es.info() != Eigen::Success) {
        throw NumericError("enforce_psd: eigendecomposition failed");
    }
    if (es.eigenvalues().minCoeff() >= 0.0) {
        return hermitian;
    }
    const Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
    CMatrix floored = es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::VectorXd scale(floored.rows());
    for (Eigen::Index i = 0; i < floored.rows(); ++i) {
        const double d = floored(i, i).real();
        if (d <= 0.0) {
            throw NumericError("enforce_psd: matrix collapses to zero variance on the diagonal");
        }
        scale(i) = 1.0 / std::sqrt(d);
    }
    CMatrix out = scale.asDiagonal() * floored * scale.asDiagonal();
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        out(i, i) = cplx(1.0, 0.0);
    }
    // Restore exact Hermitian symmetry lost to rounding.
    return (out + out.adjoint()) / 2.0;
}

CMatrix psd_factor(const CMatrix& hermitian, double tol) {
    require_square(hermitian, "psd_factor");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian);
    if (es.info() != Eigen::Success) {
        throw NumericError("psd_factor: eigendecomposition failed");
    }
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < -tol) {
        throw NumericError("psd_factor: matrix is indefinite (min eigenvalue " + std::to_string(lmin) + ")");
    }
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal();
}

CMatrix solve_checked(const CMatrix& a, const CMatrix& b, const char* what) {
    require_square(a, what);
    Eigen::FullPivLU<CMatrix> lu(a);
    if (!lu.isInvertible()) {
        throw NumericError(std::string(what) + ": singular system");
    }
    return lu.solve(b);
}

CMatrix wiener_smoother(const CMatrix& r, double noise_var) {
    require_square(r, "wiener_smoother");
    if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
        throw std::invalid_argument("wiener_smoother: noise variance must be finite and >= 0");
    }
    const auto n = r.rows();
    if (noise_var == 0.0) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
        const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
        const Eigen::VectorXd keep =
            (es.eigenvalues().array() > kRankTol * std::max(lmax, 1.0)).cast<double>().matrix();
        if (keep.sum() == static_cast<double>(n)) {
            return CMatrix::Identity(n, n);
        }
        return es.eigenvectors() * keep.asDiagonal() * es.eigenvectors().adjoint();
    }
    // R (R + sI)^{-1} = [(R + sI)^{-1} R]^H for Hermitian R.
    const CMatrix a = r + noise_var * CMatrix::Identity(n, n);
    return solve_checked(a, r, "wiener_smoother").adjoint();
}

CMatrix wiener_interpolator(const CMatrix& r, std::span<const int> idx, double noise_var) {
    require_square(r, "wiener_interpolator");
    if (!(noise_var >= 0.0) || !std::isfinite(noise_var)) {
        throw std::invalid_argument("wiener_interpolator: noise variance must be finite and >= 0");
    }
    const auto m = static_cast<Eigen::Index>(idx.size());
    CMatrix sub(m, m);
    CMatrix cols(r.rows(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto cj = idx[static_cast<std::size_t>(j)];
        if (cj < 0 || cj >= r.rows()) {
            throw ShapeError("wiener_interpolator: index out of range");
        }
        cols.col(j) = r.col(cj);
        for (Eigen::Index i = 0; i < m; ++i) {
            sub(i, j) = r(idx[static_cast<std::size_t>(i)], cj);
        }
    }
    sub += noise_var * CMatrix::Identity(m, m);
    // W = C A^{-1}  <=>  A^H W^H = C^H, and A is Hermitian.
    return solve_checked(sub, cols.adjoint(), "wiener_interpolator").adjoint();
}

double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

}  // namespace jcesd
