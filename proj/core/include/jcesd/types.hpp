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

#ifndef JCESD_TYPES_HPP
#define JCESD_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcesd {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Mismatched dimensions between tensors, configs or files.
class ShapeError : public Error {
  public:
    using Error::Error;
};

// Singular or indefinite systems, degenerate channels.
class NumericError : public Error {
  public:
    using Error::Error;
};

// Malformed text documents (parameter files, configs, manifests).
class FormatError : public Error {
  public:
    using Error::Error;
};

// File-system failures; the message carries the offending path.
class IoError : public Error {
  public:
    using Error::Error;
};

// Resource-grid dimensions: F subcarriers, S OFDM symbols, Nr receive antennas.
struct GridDims {
    int F = 24;
    int S = 12;
    int Nr = 4;

    friend bool operator==(const GridDims&, const GridDims&) = default;
};

// Complex F x S x Nr tensor stored as one F x S plane per receive antenna.
// Indexing is always (f, s, n_r). The tag keeps received samples and channel
// gains from being mixed up at call sites.
template <typename Tag>
class Cube {
  public:
    Cube() = default;
    Cube(int F, int S, int Nr) : F_(F), S_(S), planes_(static_cast<std::size_t>(Nr), CMatrix::Zero(F, S)) {
        if (F <= 0 || S <= 0 || Nr <= 0) {
            throw ShapeError("grid dimensions must be positive");
        }
    }
    explicit Cube(const GridDims& dims) : Cube(dims.F, dims.S, dims.Nr) {}

    [[nodiscard]] int F() const noexcept { return F_; }
    [[nodiscard]] int S() const noexcept { return S_; }
    [[nodiscard]] int Nr() const noexcept { return static_cast<int>(planes_.size()); }
    [[nodiscard]] GridDims dims() const noexcept { return {F_, S_, Nr()}; }
    [[nodiscard]] bool empty() const noexcept { return planes_.empty(); }

    cplx& operator()(int f, int s, int r) { return planes_[static_cast<std::size_t>(r)](f, s); }
    const cplx& operator()(int f, int s, int r) const { return planes_[static_cast<std::size_t>(r)](f, s); }

    CMatrix& antenna(int r) { return planes_[static_cast<std::size_t>(r)]; }
    [[nodiscard]] const CMatrix& antenna(int r) const { return planes_[static_cast<std::size_t>(r)]; }

    // Re-tag the same samples, e.g. an LS channel estimate built from Y.
    template <typename Other>
    [[nodiscard]] Cube<Other> retag() const {
        Cube<Other> out(F_, S_, Nr());
        for (int r = 0; r < Nr(); ++r) {
            out.antenna(r) = antenna(r);
        }
        return out;
    }

    [[nodiscard]] double squared_norm() const {
        double acc = 0.0;
        for (const auto& p : planes_) {
            acc += p.squaredNorm();
        }
        return acc;
    }

    [[nodiscard]] bool all_finite() const {
        for (const auto& p : planes_) {
            if (!p.allFinite()) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const Cube& a, const Cube& b) {
        if (a.dims() != b.dims()) {
            return false;
        }
        for (int r = 0; r < a.Nr(); ++r) {
            if (a.antenna(r) != b.antenna(r)) {
                return false;
            }
        }
        return true;
    }

  private:
    int F_ = 0;
    int S_ = 0;
    std::vector<CMatrix> planes_;
};

struct ReceivedTag {};
struct ChannelTag {};

using ReceivedGrid = Cube<ReceivedTag>;
using ChannelGrid = Cube<ChannelTag>;

// Binary F x S x 2 tensor; entry (f, s, d) is bit b_{f,s,d}.
class BitGrid {
  public:
    BitGrid() = default;
    BitGrid(int F, int S) : F_(F), S_(S), bits_(static_cast<std::size_t>(F) * S * 2, 0) {
        if (F <= 0 || S <= 0) {
            throw ShapeError("bit grid dimensions must be positive");
        }
    }

    [[nodiscard]] int F() const noexcept { return F_; }
    [[nodiscard]] int S() const noexcept { return S_; }
    [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }

    std::uint8_t& operator()(int f, int s, int d) { return bits_[index(f, s, d)]; }
    std::uint8_t operator()(int f, int s, int d) const { return bits_[index(f, s, d)]; }

    [[nodiscard]] const std::vector<std::uint8_t>& raw() const noexcept { return bits_; }
    std::vector<std::uint8_t>& raw() noexcept { return bits_; }

    friend bool operator==(const BitGrid&, const BitGrid&) = default;

  private:
    [[nodiscard]] std::size_t index(int f, int s, int d) const {
        return (static_cast<std::size_t>(f) * S_ + static_cast<std::size_t>(s)) * 2 + static_cast<std::size_t>(d);
    }

    int F_ = 0;
    int S_ = 0;
    std::vector<std::uint8_t> bits_;
};

inline void require_same_shape(const GridDims& a, const GridDims& b, const char* what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": grid shapes differ (" + std::to_string(a.F) + "x" +
                         std::to_string(a.S) + "x" + std::to_string(a.Nr) + " vs " + std::to_string(b.F) + "x" +
                         std::to_string(b.S) + "x" + std::to_string(b.Nr) + ")");
    }
}

}  // namespace jcesd

#endif  // JCESD_TYPES_HPP
