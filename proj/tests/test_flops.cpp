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


#include "jcesd/flops.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace jcesd;

namespace {

// Closed forms of the same convention: sum_{m<n} m = n(n-1)/2,
// sum_{m<n} m^2 = (n-1)n(2n-1)/6.
std::int64_t solve_closed(std::int64_t n, std::int64_t rhs) {
    const std::int64_t lu = 11 * n * (n - 1) / 2 + 8 * (n - 1) * n * (2 * n - 1) / 6;
    return n + lu + rhs * (8 * n * (n - 1) + 11 * n);
}

std::int64_t noniterative_closed(std::int64_t F, std::int64_t S, std::int64_t R) {
    const std::int64_t P = F / 2;
    return 6 * P * R + solve_closed(P, F) + F * R * (6 * P + 2 * (P - 1)) + F * S * (6 * R + 2 * (R - 1) + 3 * R + (R - 1) + 1 + 2);
}

std::int64_t pass_closed(std::int64_t F, std::int64_t S, std::int64_t R) {
    const std::int64_t mmse = F * S * (6 * R + 2 * (R - 1) + 3 * R + (R - 1) + 1 + 2);
    return mmse + 11 * F * S * R + R * S * F * (8 * F - 2) + R * F * S * (8 * S - 2);
}

}  // namespace

TEST_CASE("structural counts match the closed forms") {
    for (int F : {2, 8, 24, 48}) {
        for (int S : {1, 7, 12}) {
            for (int R : {1, 4}) {
                const auto c = structural_flops(F, S, R);
                CHECK(c.noniterative() == noniterative_closed(F, S, R));
                CHECK(c.per_pass() == pass_closed(F, S, R));
                CHECK(c.freq_build == solve_closed(F, F));
                CHECK(c.time_build == solve_closed(S, S));
            }
        }
    }
    CHECK_THROWS_AS((void)structural_flops(23, 12, 4), std::invalid_argument);
}

TEST_CASE("calibrated totals at the reference dimensions") {
    const auto r = flop_report(24, 12, 4, 6);
    CHECK(r.noniterative == 340992);
    CHECK(r.iterative == 3390912);
    CHECK(r.ratio() == doctest::Approx(9.94).epsilon(0.01));
    CHECK(r.describe().find("calibration") != std::string::npos);
}

TEST_CASE("iterative count is affine and increasing in the iteration count") {
    const auto r0 = flop_report(24, 12, 4, 0);
    const auto r1 = flop_report(24, 12, 4, 1);
    std::int64_t prev = r0.iterative;
    CHECK(r0.iterative > r0.noniterative);  // filter builds
    for (int n = 1; n <= 12; ++n) {
        const auto r = flop_report(24, 12, 4, n);
        CHECK(r.noniterative == r0.noniterative);
        CHECK(r.iterative > prev);
        // Affine up to the final rounding.
        const double expect = static_cast<double>(r0.iterative) +
                              n * (static_cast<double>(r1.iterative) - static_cast<double>(r0.iterative));
        CHECK(std::abs(static_cast<double>(r.iterative) - expect) <= n + 1.0);
        CHECK(static_cast<double>(flop_report(24, 12, 4, n).iterative) /
                  static_cast<double>(flop_report(24, 12, 4, 2 * n).iterative) <
              1.0);
        prev = r.iterative;
    }
}

TEST_CASE("counts grow with the grid") {
    const auto small = flop_report(12, 6, 2, 6);
    const auto big = flop_report(48, 14, 8, 6);
    CHECK(small.noniterative < 340992);
    CHECK(big.noniterative > 340992);
    CHECK(big.iterative > 3390912);
}
