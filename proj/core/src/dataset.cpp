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


#include "jcesd/dataset.hpp"

#include "jcesd/rng.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace jcesd {

namespace {

constexpr std::uint64_t kMaxHeaderBytes = 1U << 20U;

void put_u32(std::vector<char>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
    }
}

void put_u64(std::vector<char>& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFU));
    }
}

void put_f32(std::vector<char>& buf, double v) { put_u32(buf, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

std::uint64_t get_le(const unsigned char* p, int n) {
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) {
        v = (v << 8U) | p[i];
    }
    return v;
}

double get_f32(const unsigned char* p) {
    return static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(get_le(p, 4))));
}

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <typename T>
T parse_num(const std::string& text, const std::string& key) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("dataset manifest: bad value '" + text + "' for '" + key + "'");
    }
    return v;
}

std::uint64_t dtype_size(const std::string& dtype) {
    if (dtype == "c64") {
        return 8;
    }
    if (dtype == "f32") {
        return 4;
    }
    if (dtype == "u8") {
        return 1;
    }
    if (dtype == "u64") {
        return 8;
    }
    throw FormatError("dataset manifest: unknown dtype '" + dtype + "'");
}

std::string shape_text(const std::vector<std::uint64_t>& shape) {
    std::string out;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        out += (i ? "," : "") + std::to_string(shape[i]);
    }
    return out;
}

}  // namespace

std::uint64_t ArrayEntry::element_count() const {
    return std::accumulate(shape.begin(), shape.end(), std::uint64_t{1}, std::multiplies<>());
}

std::uint64_t ArrayEntry::byte_size() const { return element_count() * dtype_size(dtype); }

std::vector<ArrayEntry> DatasetManifest::expected_arrays() const {
    const auto n = static_cast<std::uint64_t>(num_slots);
    const auto f = static_cast<std::uint64_t>(F);
    const auto s = static_cast<std::uint64_t>(S);
    const auto r = static_cast<std::uint64_t>(Nr);
    std::vector<ArrayEntry> arrays = {
        {"x", "c64", {n, f, s}, 0},           {"bits", "u8", {n, f, s, 2}, 0},  {"h", "c64", {n, f, s, r}, 0},
        {"y", "c64", {n, f, s, r}, 0},        {"sigma2", "f32", {n}, 0},        {"snr_db", "f32", {n}, 0},
        {"doppler_hz", "f32", {n}, 0},        {"seed", "u64", {n}, 0},
    };
    std::uint64_t off = 0;
    for (auto& a : arrays) {
        a.offset = off;
        off += a.byte_size();
    }
    return arrays;
}

void DatasetManifest::validate() const {
    if (format_version != kDatasetFormatVersion) {
        throw FormatError("dataset manifest: unsupported format_version " + std::to_string(format_version));
    }
    if (F <= 0 || S <= 0 || Nr <= 0 || F % 2 != 0) {
        throw ShapeError("dataset manifest: need positive F (even), S, Nr");
    }
    if (num_slots < 0) {
        throw ShapeError("dataset manifest: num_slots must be >= 0");
    }
    const auto expected = expected_arrays();
    for (const auto& e : expected) {
        const auto it = std::find_if(arrays.begin(), arrays.end(), [&](const ArrayEntry& a) { return a.name == e.name; });
        if (it == arrays.end()) {
            throw FormatError("dataset manifest: missing array '" + e.name + "'");
        }
        if (it->dtype != e.dtype || it->shape != e.shape) {
            throw ShapeError("dataset manifest: array '" + e.name + "' is " + it->dtype + "[" + shape_text(it->shape) +
                             "], expected " + e.dtype + "[" + shape_text(e.shape) + "]");
        }
        if (it->offset != e.offset) {
            throw FormatError("dataset manifest: array '" + e.name + "' has offset " + std::to_string(it->offset) +
                              ", expected " + std::to_string(e.offset));
        }
    }
    if (arrays.size() != expected.size()) {
        throw FormatError("dataset manifest: unexpected extra arrays");
    }
}

std::string DatasetManifest::to_text() const {
    std::ostringstream os;
    os << "format = jcesd-dataset\n";
    os << "format_version = " << format_version << '\n';
    os << "F = " << F << '\n';
    os << "S = " << S << '\n';
    os << "Nr = " << Nr << '\n';
    os << "num_slots = " << num_slots << '\n';
    os << "channel = " << channel_tag << '\n';
    os << "doppler_hz = " << shortest(doppler_hz) << '\n';
    os << "snr_db = " << shortest(snr_db) << '\n';
    os << "delay_spread_s = " << shortest(delay_spread_s) << '\n';
    os << "master_seed = " << master_seed << '\n';
    os << "perturbation = " << perturbation << '\n';
    for (const auto& a : arrays) {
        os << "array = " << a.name << ' ' << a.dtype << ' ' << shape_text(a.shape) << ' ' << a.offset << '\n';
    }
    return os.str();
}

DatasetManifest DatasetManifest::from_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    DatasetManifest m;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError("dataset manifest: expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "array") {
            std::istringstream as(value);
            ArrayEntry a;
            std::string shape;
            std::string offset;
            if (!(as >> a.name >> a.dtype >> shape >> offset)) {
                throw FormatError("dataset manifest: malformed array line '" + value + "'");
            }
            dtype_size(a.dtype);
            std::istringstream ss(shape);
            std::string dim;
            while (std::getline(ss, dim, ',')) {
                a.shape.push_back(parse_num<std::uint64_t>(dim, "array " + a.name));
            }
            a.offset = parse_num<std::uint64_t>(offset, "array " + a.name);
            m.arrays.push_back(std::move(a));
            continue;
        }
        if (!kv.emplace(key, value).second) {
            throw FormatError("dataset manifest: duplicate key '" + key + "'");
        }
    }
    auto get = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw FormatError("dataset manifest: missing key '" + key + "'");
        }
        return it->second;
    };
    if (get("format") != "jcesd-dataset") {
        throw FormatError("dataset manifest: not a jcesd dataset (format = " + get("format") + ")");
    }
    m.format_version = parse_num<int>(get("format_version"), "format_version");
    m.F = parse_num<int>(get("F"), "F");
    m.S = parse_num<int>(get("S"), "S");
    m.Nr = parse_num<int>(get("Nr"), "Nr");
    m.num_slots = parse_num<int>(get("num_slots"), "num_slots");
    m.channel_tag = get("channel");
    m.doppler_hz = parse_num<double>(get("doppler_hz"), "doppler_hz");
    m.snr_db = parse_num<double>(get("snr_db"), "snr_db");
    m.delay_spread_s = parse_num<double>(get("delay_spread_s"), "delay_spread_s");
    m.master_seed = parse_num<std::uint64_t>(get("master_seed"), "master_seed");
    m.perturbation = get("perturbation");
    return m;
}

void write_dataset(const std::filesystem::path& path, DatasetManifest manifest, const std::vector<Slot>& slots) {
    manifest.num_slots = static_cast<int>(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const Slot& sl = slots[i];
        if (sl.dims() != manifest.dims() || sl.y.dims() != manifest.dims() || sl.x.rows() != manifest.F ||
            sl.x.cols() != manifest.S || sl.bits.F() != manifest.F || sl.bits.S() != manifest.S) {
            throw ShapeError("write_dataset: slot " + std::to_string(i) + " does not match the manifest dimensions");
        }
    }
    manifest.arrays = manifest.expected_arrays();
    manifest.validate();

    std::vector<char> data;
    data.reserve(static_cast<std::size_t>(manifest.arrays.back().offset + manifest.arrays.back().byte_size()));
    for (const Slot& sl : slots) {
        for (int f = 0; f < manifest.F; ++f) {
            for (int s = 0; s < manifest.S; ++s) {
                put_f32(data, sl.x(f, s).real());
                put_f32(data, sl.x(f, s).imag());
            }
        }
    }
    for (const Slot& sl : slots) {
        for (auto b : sl.bits.raw()) {
            data.push_back(static_cast<char>(b));
        }
    }
    auto put_cube = [&](auto member) {
        for (const Slot& sl : slots) {
            const auto& c = sl.*member;
            for (int f = 0; f < manifest.F; ++f) {
                for (int s = 0; s < manifest.S; ++s) {
                    for (int r = 0; r < manifest.Nr; ++r) {
                        put_f32(data, c(f, s, r).real());
                        put_f32(data, c(f, s, r).imag());
                    }
                }
            }
        }
    };
    put_cube(&Slot::h);
    put_cube(&Slot::y);
    for (const Slot& sl : slots) {
        put_f32(data, sl.sigma2);
    }
    for (const Slot& sl : slots) {
        put_f32(data, sl.snr_db);
    }
    for (const Slot& sl : slots) {
        put_f32(data, sl.doppler_hz);
    }
    for (const Slot& sl : slots) {
        put_u64(data, sl.seed);
    }

    const std::string header = manifest.to_text();
    std::vector<char> prefix;
    put_u64(prefix, header.size());

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    os.write(prefix.data(), static_cast<std::streamsize>(prefix.size()));
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    os.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!os.flush()) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const std::string where = path.string() + ": ";
    if (bytes.size() < 8) {
        throw FormatError(where + "file too short for the header length");
    }
    const std::uint64_t hlen = get_le(bytes.data(), 8);
    if (hlen > kMaxHeaderBytes || hlen > bytes.size() - 8) {
        throw FormatError(where + "header length " + std::to_string(hlen) + " exceeds the file");
    }

    Dataset ds;
    try {
        ds.manifest = DatasetManifest::from_text(std::string(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(hlen)));
        ds.manifest.validate();
    } catch (const FormatError& e) {
        throw FormatError(where + e.what());
    } catch (const ShapeError& e) {
        throw ShapeError(where + e.what());
    }
    const DatasetManifest& m = ds.manifest;

    const unsigned char* data = bytes.data() + 8 + hlen;
    const std::uint64_t avail = bytes.size() - 8 - hlen;
    std::map<std::string, const unsigned char*> base;
    for (const auto& a : m.arrays) {
        if (a.offset + a.byte_size() > avail) {
            throw FormatError(where + "array '" + a.name + "' is truncated (needs bytes " + std::to_string(a.offset) +
                              ".." + std::to_string(a.offset + a.byte_size()) + ", data section has " +
                              std::to_string(avail) + ")");
        }
        base[a.name] = data + a.offset;
    }
    const auto& last = m.arrays.back();
    if (last.offset + last.byte_size() != avail) {
        throw FormatError(where + "trailing bytes after the last array");
    }

    const auto F = static_cast<std::size_t>(m.F);
    const auto S = static_cast<std::size_t>(m.S);
    const auto R = static_cast<std::size_t>(m.Nr);
    ds.slots.resize(static_cast<std::size_t>(m.num_slots));
    for (std::size_t n = 0; n < ds.slots.size(); ++n) {
        Slot& sl = ds.slots[n];
        sl.x = CMatrix(m.F, m.S);
        const unsigned char* px = base["x"] + n * F * S * 8;
        for (std::size_t f = 0; f < F; ++f) {
            for (std::size_t s = 0; s < S; ++s, px += 8) {
                sl.x(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(s)) = cplx(get_f32(px), get_f32(px + 4));
            }
        }
        sl.bits = BitGrid(m.F, m.S);
        const unsigned char* pb = base["bits"] + n * F * S * 2;
        for (std::size_t k = 0; k < F * S * 2; ++k) {
            if (pb[k] > 1) {
                throw FormatError(where + "array 'bits' holds a value other than 0 or 1 in slot " + std::to_string(n));
            }
            sl.bits.raw()[k] = pb[k];
        }
        auto get_cube = [&](auto& cube, const char* name) {
            cube = std::remove_reference_t<decltype(cube)>(m.F, m.S, m.Nr);
            const unsigned char* p = base[name] + n * F * S * R * 8;
            for (int f = 0; f < m.F; ++f) {
                for (int s = 0; s < m.S; ++s) {
                    for (int r = 0; r < m.Nr; ++r, p += 8) {
                        cube(f, s, r) = cplx(get_f32(p), get_f32(p + 4));
                    }
                }
            }
        };
        get_cube(sl.h, "h");
        get_cube(sl.y, "y");
        sl.sigma2 = get_f32(base["sigma2"] + n * 4);
        sl.snr_db = get_f32(base["snr_db"] + n * 4);
        sl.doppler_hz = get_f32(base["doppler_hz"] + n * 4);
        sl.seed = get_le(base["seed"] + n * 8, 8);
    }
    return ds;
}

SplitIndices split_dataset(int num_slots, std::uint64_t master_seed) {
    if (num_slots < 5) {
        throw std::invalid_argument("split_dataset: need at least 5 slots");
    }
    std::vector<int> idx(static_cast<std::size_t>(num_slots));
    std::iota(idx.begin(), idx.end(), 0);
    std::uint64_t state = master_seed;
    for (auto i = static_cast<std::uint64_t>(num_slots) - 1; i >= 1; --i) {
        const auto j = splitmix64(state) % (i + 1);
        std::swap(idx[i], idx[j]);
    }
    const auto n_train = static_cast<std::size_t>(num_slots) * 6 / 10;
    const auto n_val = static_cast<std::size_t>(num_slots) * 2 / 10;
    SplitIndices out;
    out.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.val.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                   idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    out.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

NetworkInput build_network_input(const ReceivedGrid& y, const CMatrix& x_pilot_grid, const PilotPattern& pilots) {
    if (x_pilot_grid.rows() != y.F() || x_pilot_grid.cols() != y.S() || pilots.num_subcarriers() != y.F()) {
        throw ShapeError("build_network_input: pilot grid does not match the received grid");
    }
    const int Nr = y.Nr();
    NetworkInput in;
    in.F = y.F();
    in.S = y.S();
    in.C = 4 * Nr + 2;
    in.z.assign(static_cast<std::size_t>(in.F) * in.S * in.C, 0.0);
    const int im0 = 2 * Nr + 1;
    for (int f = 0; f < in.F; ++f) {
        for (int s = 0; s < in.S; ++s) {
            double* cell = in.z.data() + (static_cast<std::size_t>(f) * in.S + s) * in.C;
            const bool pilot = pilots.is_pilot(f, s);
            const cplx xp = pilot ? x_pilot_grid(f, s) : cplx(0.0, 0.0);
            cell[Nr] = xp.real();
            cell[im0 + Nr] = xp.imag();
            for (int r = 0; r < Nr; ++r) {
                const cplx v = y(f, s, r);
                cell[r] = v.real();
                cell[im0 + r] = v.imag();
                if (pilot) {
                    const cplx h = v * std::conj(xp);
                    cell[Nr + 1 + r] = h.real();
                    cell[im0 + Nr + 1 + r] = h.imag();
                }
            }
        }
    }
    return in;
}

}  // namespace jcesd
