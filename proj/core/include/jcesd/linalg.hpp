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

#ifndef JCESD_LINALG_HPP
#define JCESD_LINALG_HPP

#include "jcesd/types.hpp"

#include <span>

namespace jcesd {

// Hermitian Toeplitz matrix with first row v: M(i,j) = v[j-i] for j >= i and
// conj(v[i-j]) below the diagonal. Throws NumericError if Im v[0] != 0.
[[nodiscard]] CMatrix toeplitz_hermitian(const CVector& v);

[[nodiscard]] double min_eigenvalue(const CMatrix& hermitian);

// Floor negative eigenvalues at zero and rescale to a unit diagonal. Returns
// the input unchanged when it is already positive semidefinite.
[[nodiscard]] CMatrix enforce_psd(const CMatrix& hermitian);

// A with A A^H = R. Eigenvalues in [-tol, 0) are floored; anything more
// negative raises NumericError.
[[nodiscard]] CMatrix psd_factor(const CMatrix& hermitian, double tol = 1e-8);

// Solve A X = B with full-pivot LU; singular systems raise NumericError.
[[nodiscard]] CMatrix solve_checked(const CMatrix& a, const CMatrix& b, const char* what);

// Wiener smoother R (R + s I)^{-1}. At s == 0 this is the identity for
// full-rank R and the orthogonal projector onto range(R) otherwise.
[[nodiscard]] CMatrix wiener_smoother(const CMatrix& r, double noise_var);

// Interpolator R(:, idx) [R(idx, idx) + s I]^{-1}; rows = R.rows(), cols = idx.size().
[[nodiscard]] CMatrix wiener_interpolator(const CMatrix& r, std::span<const int> idx, double noise_var);

// Largest singular value.
[[nodiscard]] double spectral_norm(const CMatrix& m);

}  // namespace jcesd

#endif  // JCESD_LINALG_HPP
