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


#include "jcesd/harness.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace jcesd {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, int lineno) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) {
        throw FormatError("report line " + std::to_string(lineno) + ": unterminated quote");
    }
    out.push_back(std::move(cur));
    return out;
}

template <typename T>
T parse_cell(const std::string& text, const char* column, int lineno) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("report line " + std::to_string(lineno) + ": bad " + column + " '" + text + "'");
    }
    return v;
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
    if (text == "csv") {
        return ReportFormat::csv;
    }
    if (text == "json") {
        return ReportFormat::json;
    }
    throw FormatError("unknown report format '" + std::string(text) + "' (expected csv or json)");
}

ReportFormat report_format_for(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".json") {
        return ReportFormat::json;
    }
    if (ext == ".csv") {
        return ReportFormat::csv;
    }
    throw FormatError("cannot infer report format from '" + path.string() + "' (use .csv or .json)");
}

void write_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    os << kReportColumns << '\n';
    for (const auto& r : rows) {
        os << csv_field(r.method) << ',' << csv_field(r.channel) << ',' << format_real(r.doppler_hz) << ','
           << format_real(r.snr_db) << ',' << csv_field(r.perturbation) << ',' << r.num_bits << ',' << r.bit_errors
           << ',' << format_real(r.ber) << ',' << format_real(r.channel_mse) << ',' << format_real(r.wall_time_s)
           << '\n';
    }
}

std::vector<ReportRow> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw FormatError("report: empty input, expected a header line");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kReportColumns) {
        throw FormatError("report: unexpected header '" + line + "'");
    }
    std::vector<ReportRow> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto f = split_csv_line(line, lineno);
        if (f.size() != 10) {
            throw FormatError("report line " + std::to_string(lineno) + ": expected 10 columns, got " +
                              std::to_string(f.size()));
        }
        ReportRow r;
        r.method = f[0];
        r.channel = f[1];
        r.doppler_hz = parse_cell<double>(f[2], "doppler_hz", lineno);
        r.snr_db = parse_cell<double>(f[3], "snr_db", lineno);
        r.perturbation = f[4];
        r.num_bits = parse_cell<std::int64_t>(f[5], "num_bits", lineno);
        r.bit_errors = parse_cell<std::int64_t>(f[6], "bit_errors", lineno);
        r.ber = parse_cell<double>(f[7], "ber", lineno);
        r.channel_mse = parse_cell<double>(f[8], "channel_mse", lineno);
        r.wall_time_s = parse_cell<double>(f[9], "wall_time_s", lineno);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_json(std::ostream& os, const std::vector<ReportRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["method"] = r.method;
        o["channel"] = r.channel;
        o["doppler_hz"] = r.doppler_hz;
        o["snr_db"] = r.snr_db;
        o["perturbation"] = r.perturbation;
        o["num_bits"] = r.num_bits;
        o["bit_errors"] = r.bit_errors;
        o["ber"] = r.ber;
        o["channel_mse"] = r.channel_mse;
        o["wall_time_s"] = r.wall_time_s;
        arr.push_back(std::move(o));
    }
    os << arr.dump(2) << '\n';
}

std::vector<ReportRow> read_json(std::istream& is) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("report: invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw FormatError("report: JSON document must be an array of rows");
    }
    std::vector<ReportRow> rows;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& o = doc[i];
        try {
            ReportRow r;
            r.method = o.at("method").get<std::string>();
            r.channel = o.at("channel").get<std::string>();
            r.doppler_hz = o.at("doppler_hz").get<double>();
            r.snr_db = o.at("snr_db").get<double>();
            r.perturbation = o.at("perturbation").get<std::string>();
            r.num_bits = o.at("num_bits").get<std::int64_t>();
            r.bit_errors = o.at("bit_errors").get<std::int64_t>();
            r.ber = o.at("ber").get<double>();
            r.channel_mse = o.at("channel_mse").get<double>();
            r.wall_time_s = o.at("wall_time_s").get<double>();
            rows.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("report: row " + std::to_string(i) + ": " + e.what());
        }
    }
    return rows;
}

void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    if (format == ReportFormat::csv) {
        write_csv(os, rows);
    } else {
        write_json(os, rows);
    }
    if (!os.flush()) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

std::vector<ReportRow> load_report(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return report_format_for(path) == ReportFormat::csv ? read_csv(is) : read_json(is);
}

}  // namespace jcesd
