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

#include "test_util.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <array>

using namespace jcesd;
using testutil::max_abs_diff;

namespace {

CVector coeffs(std::initializer_list<cplx> v) {
    CVector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (auto c : v) {
        out(i++) = c;
    }
    return out;
}

}  // namespace

TEST_CASE("toeplitz_hermitian follows the first-row definition") {
    const CVector v = coeffs({1.0, cplx(0.5, 0.25), cplx(-0.1, 0.3), cplx(0.05, -0.02)});
    const CMatrix m = toeplitz_hermitian(v);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const cplx expect = j >= i ? v(j - i) : std::conj(v(i - j));
            CHECK(m(i, j) == expect);
        }
    }
    CHECK(m == m.adjoint());
    CHECK_THROWS_AS((void)toeplitz_hermitian(coeffs({cplx(1.0, 0.1), 0.5})), NumericError);
    CHECK_THROWS_AS((void)toeplitz_hermitian(CVector()), ShapeError);
}

TEST_CASE("enforce_psd leaves PSD input alone and repairs indefinite input") {
    const CMatrix good = toeplitz_hermitian(coeffs({1.0, 0.5, 0.25}));
    CHECK(enforce_psd(good) == good);

    // Toeplitz(1, 0.9, -0.9) is indefinite.
    const CMatrix bad = toeplitz_hermitian(coeffs({1.0, 0.9, -0.9}));
    REQUIRE(min_eigenvalue(bad) < 0.0);
    const CMatrix fixed = enforce_psd(bad);
    CHECK(min_eigenvalue(fixed) > -1e-12);
    for (int i = 0; i < 3; ++i) {
        CHECK(fixed(i, i) == cplx(1.0, 0.0));
    }
    CHECK(max_abs_diff(fixed, fixed.adjoint()) == 0.0);
}

TEST_CASE("psd_factor reproduces R and rejects indefinite matrices") {
    const CMatrix r = toeplitz_hermitian(coeffs({1.0, cplx(0.3, 0.1), 0.1, 0.05}));
    const CMatrix a = psd_factor(r);
    CHECK(max_abs_diff(a * a.adjoint(), r) < 1e-13);

    CMatrix ones = CMatrix::Ones(5, 5);  // rank one, eigenvalues 5, 0, 0, 0, 0
    const CMatrix b = psd_factor(ones);
    CHECK(max_abs_diff(b * b.adjoint(), ones) < 1e-13);

    CHECK_THROWS_AS((void)psd_factor(toeplitz_hermitian(coeffs({1.0, 0.9, -0.9}))), NumericError);
}

TEST_CASE("wiener_smoother scalar and limit cases") {
    const CMatrix eye = CMatrix::Identity(4, 4);
    CHECK(max_abs_diff(wiener_smoother(eye, 0.25), eye / 1.25) < 1e-15);
    CHECK(wiener_smoother(eye, 0.0) == eye);

    // Rank-one R at zero noise: projector onto span(1).
    const CMatrix ones = CMatrix::Ones(3, 3);
    const CMatrix p = wiener_smoother(ones, 0.0);
    CHECK(max_abs_diff(p, ones / 3.0) < 1e-14);
    CHECK(max_abs_diff(p * p, p) < 1e-14);

    // Oracle: explicit inverse.
    const CMatrix r = toeplitz_hermitian(coeffs({1.0, cplx(0.7, 0.1), cplx(0.3, 0.2), 0.1, 0.02}));
    const CMatrix expect = r * (r + 0.1 * CMatrix::Identity(5, 5)).inverse();
    CHECK(max_abs_diff(wiener_smoother(r, 0.1), expect) < 1e-13);
    CHECK(spectral_norm(wiener_smoother(r, 0.1)) <= 1.0 + 1e-12);

    CHECK_THROWS_AS((void)wiener_smoother(r, -1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)wiener_smoother(CMatrix(2, 3), 0.1), ShapeError);
}

TEST_CASE("wiener_interpolator matches the explicit formula") {
    const CMatrix r = toeplitz_hermitian(coeffs({1.0, cplx(0.8, 0.1), cplx(0.5, 0.2), cplx(0.3, 0.1), 0.1, 0.05}));
    const std::array<int, 3> idx = {0, 2, 4};
    CMatrix sub(3, 3);
    CMatrix cols(6, 3);
    for (int i = 0; i < 3; ++i) {
        cols.col(i) = r.col(idx[static_cast<std::size_t>(i)]);
        for (int j = 0; j < 3; ++j) {
            sub(i, j) = r(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        }
    }
    const CMatrix expect = cols * (sub + 0.2 * CMatrix::Identity(3, 3)).inverse();
    const CMatrix w = wiener_interpolator(r, idx, 0.2);
    CHECK(max_abs_diff(w, expect) < 1e-13);

    // Noise-free interpolation reproduces the pilot rows exactly.
    const CMatrix w0 = wiener_interpolator(r, idx, 0.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(w0(idx[static_cast<std::size_t>(i)], j) - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
    }
    const std::array<int, 1> out_of_range = {9};
    CHECK_THROWS_AS((void)wiener_interpolator(r, out_of_range, 0.1), ShapeError);
}

TEST_CASE("solve_checked rejects singular systems") {
    CHECK_THROWS_AS((void)solve_checked(CMatrix::Ones(3, 3), CMatrix::Identity(3, 3), "t"), NumericError);
    const CMatrix a = CMatrix::Identity(2, 2) * 2.0;
    CHECK(max_abs_diff(solve_checked(a, CMatrix::Identity(2, 2), "t"), CMatrix::Identity(2, 2) / 2.0) == 0.0);
}
