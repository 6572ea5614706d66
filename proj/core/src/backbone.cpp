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


#include "jcesd/backbone.hpp"

#include "jcesd/linalg.hpp"
#include "jcesd/receiver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace jcesd {

namespace {

void check_positive(const double* v, std::size_t n, const char* name) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
            throw std::invalid_argument(std::string("backbone params: ") + name + "[" + std::to_string(i + 1) +
                                        "] must be finite and > 0");
        }
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename Range>
void write_line(std::ostream& os, const char* key, const Range& values) {
    os << key << " =";
    for (double v : values) {
        os << ' ' << format_double(v);
    }
    os << '\n';
}

struct Field {
    int line = 0;
    std::vector<double> values;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& text, int line, const std::string& key) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw FormatError("line " + std::to_string(line) + ": field '" + key + "' has a malformed number '" + tok +
                              "'");
        }
        out.push_back(v);
    }
    return out;
}

const Field& require(const std::map<std::string, Field>& fields, const std::string& key) {
    const auto it = fields.find(key);
    if (it == fields.end()) {
        throw FormatError("missing field '" + key + "'");
    }
    return it->second;
}

int require_int(const std::map<std::string, Field>& fields, const std::string& key) {
    const Field& f = require(fields, key);
    if (f.values.size() != 1 || f.values[0] != std::floor(f.values[0]) || f.values[0] < 1 || f.values[0] > 1e6) {
        throw FormatError("line " + std::to_string(f.line) + ": field '" + key + "' must be one positive integer");
    }
    return static_cast<int>(f.values[0]);
}

const std::vector<double>& require_len(const std::map<std::string, Field>& fields, const std::string& key,
                                       std::size_t n) {
    const Field& f = require(fields, key);
    if (f.values.size() != n) {
        throw FormatError("line " + std::to_string(f.line) + ": field '" + key + "' expects " + std::to_string(n) +
                          " values, got " + std::to_string(f.values.size()));
    }
    return f.values;
}

CVector require_complex(const std::map<std::string, Field>& fields, const std::string& stem, int n,
                        const char* dim_name) {
    const Field& re = require(fields, stem + "_re");
    const Field& im = require(fields, stem + "_im");
    for (const auto* f : {&re, &im}) {
        if (f->values.size() != static_cast<std::size_t>(n)) {
            throw ShapeError("line " + std::to_string(f->line) + ": field '" + stem + (f == &re ? "_re" : "_im") +
                             "' has " + std::to_string(f->values.size()) + " values but " + dim_name + " = " +
                             std::to_string(n));
        }
    }
    CVector v(n);
    for (int k = 0; k < n; ++k) {
        v(k) = cplx(re.values[static_cast<std::size_t>(k)], im.values[static_cast<std::size_t>(k)]);
    }
    return v;
}

}  // namespace

void BackboneParams::validate(int F, int S) const {
    check_positive(gamma.data(), gamma.size(), "gamma");
    check_positive(sigma.data(), sigma.size(), "sigma");
    check_positive(rho.data(), rho.size(), "rho");
    if (c.size() != F || d.size() != S) {
        throw ShapeError("backbone params: c must have length F = " + std::to_string(F) + " and d length S = " +
                         std::to_string(S) + " (got " + std::to_string(c.size()) + ", " + std::to_string(d.size()) +
                         ")");
    }
    CorrelationSpec{c, d}.validate();
}

BackboneParams BackboneParams::uniform(double noise_std, const CorrelationSpec& spec) {
    BackboneParams p;
    p.gamma.fill(noise_std);
    p.sigma.fill(noise_std);
    p.rho.fill(noise_std);
    p.c = spec.c;
    p.d = spec.d;
    return p;
}

WienerOperatorSet build_operators(const BackboneParams& params, const PilotPattern& pilots) {
    const auto F = static_cast<int>(params.c.size());
    const auto S = static_cast<int>(params.d.size());
    params.validate(F, S);
    if (pilots.num_subcarriers() != F) {
        throw ShapeError("build_operators: pilot pattern does not match length of c");
    }
    const CorrelationMatrices corr = CorrelationMatrices::from({params.c, params.d});
    WienerOperatorSet ops;
    ops.w_interp = wiener_interpolator(corr.rf, pilots.subcarriers(), params.gamma[0] * params.gamma[0]);
    const CMatrix eye_s = CMatrix::Identity(S, S);
    for (std::size_t i = 0; i < ops.w_freq.size(); ++i) {
        const double g2 = params.gamma[i + 1] * params.gamma[i + 1];
        ops.w_freq[i] = wiener_smoother(corr.rf, g2);
        const double r2 = params.rho[i] * params.rho[i];
        ops.w_time[i] = solve_checked(corr.rs + r2 * eye_s, corr.rs, "build_operators");
    }
    return ops;
}

CMatrix soft_decision(const CMatrix& x, double slope) {
    CMatrix out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            out(i, j) = cplx(std::tanh(slope * x(i, j).real()), std::tanh(slope * x(i, j).imag())) * kHalfSqrt2;
        }
    }
    return out;
}

BackboneOutput backbone_forward(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                const BackboneParams& params, const WienerOperatorSet& ops, double slope) {
    params.validate(y.F(), y.S());
    BackboneOutput out;
    StageTrace& t = out.trace;
    t.min_soft_input = std::numeric_limits<double>::infinity();

    const CMatrix h_ls = ls_pilot_estimate(y, pilots, x_pilot);
    ChannelGrid h = extrapolate_first_symbol(ops.w_interp * h_ls, y.S());
    ++t.interpolations;

    for (std::size_t i = 0; i < ops.w_freq.size(); ++i) {
        const CMatrix x_t = mmse_detect(h, y, params.sigma[i] * params.sigma[i]);
        ++t.detections;
        const double margin = std::min(x_t.real().cwiseAbs().minCoeff(), x_t.imag().cwiseAbs().minCoeff());
        t.min_soft_input = std::min(t.min_soft_input, margin);
        h = apply_freq_filter(ls_full(y, soft_decision(x_t, slope)), ops.w_freq[i]);
        ++t.freq_filters;
        h = apply_time_filter(h, ops.w_time[i]);
        ++t.time_filters;
    }
    const double s6 = params.sigma[kBackboneLayers - 1];
    out.x_soft = mmse_detect(h, y, s6 * s6);
    ++t.detections;
    out.h_est = std::move(h);
    return out;
}

BackboneOutput backbone_forward(const ReceivedGrid& y, const PilotPattern& pilots, const CVector& x_pilot,
                                const BackboneParams& params) {
    return backbone_forward(y, pilots, x_pilot, params, build_operators(params, pilots));
}

void write_params(std::ostream& os, const BackboneParams& params) {
    os << "# jcesd backbone parameters\n";
    os << "version = " << kBackboneFormatVersion << '\n';
    os << "F = " << params.c.size() << '\n';
    os << "S = " << params.d.size() << '\n';
    os << "L = " << kBackboneLayers << '\n';
    write_line(os, "gamma", params.gamma);
    write_line(os, "sigma", params.sigma);
    write_line(os, "rho", params.rho);
    std::vector<double> re;
    std::vector<double> im;
    auto split = [&](const CVector& v) {
        re.clear();
        im.clear();
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            re.push_back(v(k).real());
            im.push_back(v(k).imag());
        }
    };
    split(params.c);
    write_line(os, "c_re", re);
    write_line(os, "c_im", im);
    split(params.d);
    write_line(os, "d_re", re);
    write_line(os, "d_im", im);
}

BackboneParams read_params(std::istream& is) {
    static const char* const known[] = {"version", "F",    "S",    "L",    "gamma", "sigma",
                                        "rho",     "c_re", "c_im", "d_re", "d_im"};
    std::map<std::string, Field> fields;
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw FormatError("line " + std::to_string(line) + ": expected 'key = values'");
        }
        const std::string key = trim(text.substr(0, eq));
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw FormatError("line " + std::to_string(line) + ": unknown field '" + key + "'");
        }
        if (fields.count(key) != 0) {
            throw FormatError("line " + std::to_string(line) + ": duplicate field '" + key + "'");
        }
        fields[key] = Field{line, parse_numbers(text.substr(eq + 1), line, key)};
    }

    const int version = require_int(fields, "version");
    if (version != kBackboneFormatVersion) {
        throw FormatError("unsupported parameter file version " + std::to_string(version));
    }
    const int L = require_int(fields, "L");
    if (L != kBackboneLayers) {
        throw FormatError("line " + std::to_string(fields["L"].line) + ": field 'L' must be " +
                          std::to_string(kBackboneLayers));
    }
    const int F = require_int(fields, "F");
    const int S = require_int(fields, "S");

    BackboneParams p;
    const auto& g = require_len(fields, "gamma", kBackboneLayers);
    const auto& s = require_len(fields, "sigma", kBackboneLayers);
    const auto& r = require_len(fields, "rho", kBackboneLayers - 1);
    std::copy(g.begin(), g.end(), p.gamma.begin());
    std::copy(s.begin(), s.end(), p.sigma.begin());
    std::copy(r.begin(), r.end(), p.rho.begin());
    p.c = require_complex(fields, "c", F, "F");
    p.d = require_complex(fields, "d", S, "S");
    p.validate(F, S);
    return p;
}

void save_params(const BackboneParams& params, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_params(os, params);
    if (!os.flush()) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

BackboneParams load_params(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    try {
        return read_params(is);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    } catch (const ShapeError& e) {
        throw ShapeError(path.string() + ": " + e.what());
    }
}

}  // namespace jcesd
