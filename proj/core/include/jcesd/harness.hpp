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


#ifndef JCESD_HARNESS_HPP
#define JCESD_HARNESS_HPP

#include "jcesd/channel.hpp"
#include "jcesd/perturb.hpp"
#include "jcesd/receiver.hpp"
#include "jcesd/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace jcesd {

enum class Method { noniterative, iterative, backbone };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] Method parse_method(std::string_view text);

enum class EvalSplit { test, all };

// Monte-Carlo sweep over (Doppler, SNR, method). Text form is one
// `key = value` per line; list values are comma separated.
struct SweepConfig {
    ChannelModel channel = ChannelModel::kronecker;
    std::vector<double> doppler_hz = {0.0};
    std::vector<double> snr_db = {20.0};
    int num_slots = 600;  // generated per Doppler value, before splitting
    std::vector<Method> methods = {Method::noniterative, Method::iterative};
    Perturbation perturbation;
    NoiseMode noise_mode = NoiseMode::known;
    std::uint64_t seed = 1;
    double delay_spread_s = 100e-9;
    double subcarrier_spacing_hz = 30e3;
    int F = 24;
    int S = 12;
    int Nr = 4;
    int iterations = kDefaultIterations;
    EvalSplit eval_split = EvalSplit::test;
    std::string backbone_params;  // parameter file; empty = true-sigma defaults
    std::string dataset;          // evaluate a stored dataset instead of synthesizing
    int threads = 0;              // 0 = hardware concurrency
    bool record_wall_time = false;

    void validate() const;
    // Applies one `key = value` assignment; throws FormatError on unknown keys.
    void set(const std::string& key, const std::string& value);
    [[nodiscard]] static SweepConfig parse(std::istream& is);
    [[nodiscard]] static SweepConfig load(const std::filesystem::path& path);
    [[nodiscard]] std::string to_text() const;
};

struct ReportRow {
    std::string method;
    std::string channel;
    double doppler_hz = 0.0;
    double snr_db = 0.0;
    std::string perturbation = "none";
    std::int64_t num_bits = 0;
    std::int64_t bit_errors = 0;
    double ber = 0.0;
    double channel_mse = 0.0;
    double wall_time_s = 0.0;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct RowFailure {
    std::string method;
    double doppler_hz = 0.0;
    double snr_db = 0.0;
    std::string message;
};

struct SweepResult {
    std::vector<ReportRow> rows;
    std::vector<RowFailure> failures;
};

// Rows ordered by Doppler, then SNR, then method as listed. Slot k of Doppler
// index i uses seed derive_seed(seed, {i, k}) at every SNR, so SNR points
// share channels, data and noise shape. BER excludes pilot bits.
[[nodiscard]] SweepResult run_sweep(const SweepConfig& config);

// sum |H_est - H|^2 / sum |H|^2.
[[nodiscard]] double channel_mse(const ChannelGrid& h_est, const ChannelGrid& h_true);

inline constexpr const char* kReportColumns =
    "method,channel,doppler_hz,snr_db,perturbation,num_bits,bit_errors,ber,channel_mse,wall_time_s";

enum class ReportFormat { csv, json };

[[nodiscard]] ReportFormat parse_report_format(std::string_view text);
// Infers the format from a .csv / .json extension.
[[nodiscard]] ReportFormat report_format_for(const std::filesystem::path& path);

void write_csv(std::ostream& os, const std::vector<ReportRow>& rows);
[[nodiscard]] std::vector<ReportRow> read_csv(std::istream& is);
void write_json(std::ostream& os, const std::vector<ReportRow>& rows);
[[nodiscard]] std::vector<ReportRow> read_json(std::istream& is);

void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, const std::filesystem::path& path);
[[nodiscard]] std::vector<ReportRow> load_report(const std::filesystem::path& path);

// Shortest decimal that parses back to the same double.
[[nodiscard]] std::string format_real(double v);

}  // namespace jcesd

#endif  // JCESD_HARNESS_HPP
