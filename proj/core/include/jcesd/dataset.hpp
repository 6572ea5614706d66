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


#ifndef JCESD_DATASET_HPP
#define JCESD_DATASET_HPP

#include "jcesd/channel.hpp"
#include "jcesd/constellation.hpp"
#include "jcesd/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace jcesd {

inline constexpr int kDatasetFormatVersion = 1;

// One raw array in the data section. dtype is one of c64 (interleaved
// float32 re/im), f32, u8, u64, all little-endian. offset counts bytes from
// the first byte after the header.
struct ArrayEntry {
    std::string name;
    std::string dtype;
    std::vector<std::uint64_t> shape;
    std::uint64_t offset = 0;

    [[nodiscard]] std::uint64_t element_count() const;
    [[nodiscard]] std::uint64_t byte_size() const;

    friend bool operator==(const ArrayEntry&, const ArrayEntry&) = default;
};

struct DatasetManifest {
    int format_version = kDatasetFormatVersion;
    int F = 24;
    int S = 12;
    int Nr = 4;
    int num_slots = 0;
    std::string channel_tag = "kronecker";
    double doppler_hz = 0.0;
    double snr_db = 0.0;
    double delay_spread_s = 100e-9;
    std::uint64_t master_seed = 0;
    std::string perturbation = "none";
    std::vector<ArrayEntry> arrays;  // filled by write_dataset / read_dataset

    [[nodiscard]] GridDims dims() const noexcept { return {F, S, Nr}; }
    // Checks dimensions and that the array table matches the expected layout.
    void validate() const;
    // The expected array table for these dimensions, with packed offsets.
    [[nodiscard]] std::vector<ArrayEntry> expected_arrays() const;

    [[nodiscard]] std::string to_text() const;
    [[nodiscard]] static DatasetManifest from_text(const std::string& text);
};

struct Dataset {
    DatasetManifest manifest;
    std::vector<Slot> slots;
};

// File layout: u64 LE header length, UTF-8 `key = value` manifest, then the
// arrays x c64[N,F,S], bits u8[N,F,S,2], h c64[N,F,S,Nr], y c64[N,F,S,Nr],
// sigma2 f32[N], snr_db f32[N], doppler_hz f32[N], seed u64[N]. Index order is
// slot-major, then (f, s, r) / (f, s, d).
// num_slots and arrays in `manifest` are overwritten from `slots`.
void write_dataset(const std::filesystem::path& path, DatasetManifest manifest, const std::vector<Slot>& slots);
[[nodiscard]] Dataset read_dataset(const std::filesystem::path& path);

struct SplitIndices {
    std::vector<int> train;
    std::vector<int> val;
    std::vector<int> test;
};

// Fisher-Yates shuffle driven by SplitMix64(seed), j = next % (i + 1) for
// i = N-1 .. 1; the first floor(0.6N) go to train, the next floor(0.2N) to
// val, the rest to test. Each part is returned sorted.
[[nodiscard]] SplitIndices split_dataset(int num_slots, std::uint64_t master_seed);

// Real F x S x (4Nr + 2) tensor; channel c of cell (f, s) at (f*S + s)*C + c.
struct NetworkInput {
    int F = 0;
    int S = 0;
    int C = 0;
    std::vector<double> z;

    [[nodiscard]] double at(int f, int s, int c) const {
        return z[(static_cast<std::size_t>(f) * S + static_cast<std::size_t>(s)) * C + static_cast<std::size_t>(c)];
    }
};

// Channels: [Re Y (Nr), Re Xp, Re H_LS (Nr), Im Y (Nr), Im Xp, Im H_LS (Nr)].
// H_LS = Y conj(Xp) at pilot cells and zero elsewhere.
[[nodiscard]] NetworkInput build_network_input(const ReceivedGrid& y, const CMatrix& x_pilot_grid,
                                               const PilotPattern& pilots);

}  // namespace jcesd

#endif  // JCESD_DATASET_HPP
