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


#include "jcesd/perturb.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace jcesd {

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

double parse_real(std::string_view tok, std::string_view whole) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        throw FormatError("perturbation '" + std::string(whole) + "': malformed number '" + std::string(tok) + "'");
    }
    return v;
}

}  // namespace

ReceivedGrid apply_cfo(const ReceivedGrid& y, double delta_f_hz) {
    if (!std::isfinite(delta_f_hz)) {
        throw std::invalid_argument("apply_cfo: frequency offset must be finite");
    }
    ReceivedGrid out = y;
    if (delta_f_hz == 0.0) {
        return out;
    }
    for (int s = 1; s < y.S(); ++s) {
        const double theta = 2.0 * std::numbers::pi * delta_f_hz * kCfoSymbolPeriodS * s;
        const cplx rot = std::polar(1.0, theta);
        for (int r = 0; r < y.Nr(); ++r) {
            out.antenna(r).col(s) *= rot;
        }
    }
    return out;
}

ReceivedGrid apply_asymmetric_noise(const ReceivedGrid& y, double sigma1_sq, double sigma2_sq, Rng& rng) {
    if (!(sigma1_sq >= 0.0) || !(sigma2_sq >= 0.0) || !std::isfinite(sigma1_sq) || !std::isfinite(sigma2_sq)) {
        throw std::invalid_argument("apply_asymmetric_noise: variances must be finite and >= 0");
    }
    ReceivedGrid out = y;
    const int half = y.F() / 2;
    for (int f = 0; f < y.F(); ++f) {
        const double var = 2.0 * (f < half ? sigma1_sq : sigma2_sq);
        for (int s = 0; s < y.S(); ++s) {
            for (int r = 0; r < y.Nr(); ++r) {
                out(f, s, r) += complex_normal(rng, var);
            }
        }
    }
    return out;
}

Perturbation Perturbation::parse(std::string_view text) {
    if (text == "none" || text.empty()) {
        return {};
    }
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (head == "cfo") {
        return {Kind::cfo, parse_real(args, text), 0.0};
    }
    if (head == "asym_noise") {
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) {
            throw FormatError("perturbation '" + std::string(text) + "': expected asym_noise:<s1sq>,<s2sq>");
        }
        Perturbation p{Kind::asym_noise, parse_real(args.substr(0, comma), text),
                       parse_real(args.substr(comma + 1), text)};
        if (p.a < 0.0 || p.b < 0.0) {
            throw FormatError("perturbation '" + std::string(text) + "': variances must be >= 0");
        }
        return p;
    }
    throw FormatError("unknown perturbation '" + std::string(text) + "' (expected none, cfo:<df> or asym_noise:<a>,<b>)");
}

std::string Perturbation::describe() const {
    switch (kind) {
        case Kind::none:
            return "none";
        case Kind::cfo:
            return "cfo:" + shortest(a);
        case Kind::asym_noise:
            return "asym_noise:" + shortest(a) + "," + shortest(b);
    }
    return "none";
}

ReceivedGrid Perturbation::apply(const ReceivedGrid& y, Rng& rng) const {
    switch (kind) {
        case Kind::none:
            return y;
        case Kind::cfo:
            return apply_cfo(y, a);
        case Kind::asym_noise:
            return apply_asymmetric_noise(y, a, b, rng);
    }
    return y;
}

}  // namespace jcesd
