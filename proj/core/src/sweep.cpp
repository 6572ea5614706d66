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

#include "jcesd/backbone.hpp"
#include "jcesd/dataset.hpp"
#include "jcesd/rng.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

namespace jcesd {

namespace {

constexpr std::uint64_t kPerturbStream = 0x70657274;  // separates perturbation draws from slot draws

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream is(value);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

template <typename T>
T parse_value(const std::string& text, const std::string& key) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("config: bad value '" + text + "' for '" + key + "'");
    }
    return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw FormatError("config: bad boolean '" + text + "' for '" + key + "'");
}

std::vector<double> parse_reals(const std::string& value, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(value)) {
        out.push_back(parse_value<double>(item, key));
    }
    return out;
}

std::string join_reals(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + format_real(v[i]);
    }
    return out;
}

struct SlotOutcome {
    ErrorCount errors;
    double mse = 0.0;
    double seconds = 0.0;
    std::optional<std::string> failure;
};

// Slot source for one Doppler group: synthesized on demand or taken from a dataset.
struct Group {
    double doppler_hz = 0.0;
    std::optional<SlotSynthesizer> synth;
    const std::vector<Slot>* stored = nullptr;
    std::vector<int> eval;
};

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    const auto hw = std::max(1U, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(n, threads > 0 ? static_cast<std::size_t>(threads) : hw);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace

std::string format_real(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::noniterative:
            return "noniterative";
        case Method::iterative:
            return "iterative";
        case Method::backbone:
            return "backbone";
    }
    return "unknown";
}

Method parse_method(std::string_view text) {
    for (auto m : {Method::noniterative, Method::iterative, Method::backbone}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    throw FormatError("unknown method '" + std::string(text) + "' (expected noniterative, iterative or backbone)");
}

void SweepConfig::validate() const {
    if (doppler_hz.empty() || snr_db.empty()) {
        throw std::invalid_argument("config: doppler_hz and snr_db lists must be non-empty");
    }
    if (methods.empty()) {
        throw std::invalid_argument("config: methods must be non-empty");
    }
    if (dataset.empty() && num_slots < (eval_split == EvalSplit::test ? 5 : 1)) {
        throw std::invalid_argument("config: num_slots too small for the chosen split");
    }
    for (double d : doppler_hz) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("config: Doppler values must be finite and >= 0");
        }
    }
    for (double s : snr_db) {
        if (std::isnan(s) || s == -std::numeric_limits<double>::infinity()) {
            throw std::invalid_argument("config: SNR values must be numbers above -inf");
        }
    }
    if (iterations < 0 || iterations > kMaxIterations) {
        throw std::invalid_argument("config: iterations out of range");
    }
    if (threads < 0) {
        throw std::invalid_argument("config: threads must be >= 0");
    }
    ChannelParams{channel, 0.0, delay_spread_s, subcarrier_spacing_hz, default_symbol_duration(subcarrier_spacing_hz),
                  F, S, Nr}
        .validate();
}

void SweepConfig::set(const std::string& key, const std::string& value) {
    if (key == "channel") {
        channel = parse_channel_model(value);
    } else if (key == "doppler_hz") {
        doppler_hz = parse_reals(value, key);
    } else if (key == "snr_db") {
        snr_db = parse_reals(value, key);
    } else if (key == "num_slots") {
        num_slots = parse_value<int>(value, key);
    } else if (key == "methods") {
        methods.clear();
        for (const auto& m : split_list(value)) {
            methods.push_back(parse_method(m));
        }
    } else if (key == "perturbation") {
        perturbation = Perturbation::parse(value);
    } else if (key == "noise_mode") {
        noise_mode = parse_noise_mode(value);
    } else if (key == "seed") {
        seed = parse_value<std::uint64_t>(value, key);
    } else if (key == "delay_spread_s") {
        delay_spread_s = parse_value<double>(value, key);
    } else if (key == "subcarrier_spacing_hz") {
        subcarrier_spacing_hz = parse_value<double>(value, key);
    } else if (key == "F") {
        F = parse_value<int>(value, key);
    } else if (key == "S") {
        S = parse_value<int>(value, key);
    } else if (key == "Nr") {
        Nr = parse_value<int>(value, key);
    } else if (key == "iterations") {
        iterations = parse_value<int>(value, key);
    } else if (key == "eval_split") {
        if (value == "test") {
            eval_split = EvalSplit::test;
        } else if (value == "all") {
            eval_split = EvalSplit::all;
        } else {
            throw FormatError("config: eval_split must be test or all");
        }
    } else if (key == "backbone_params") {
        backbone_params = value;
    } else if (key == "dataset") {
        dataset = value;
    } else if (key == "threads") {
        threads = parse_value<int>(value, key);
    } else if (key == "record_wall_time") {
        record_wall_time = parse_bool(value, key);
    } else {
        throw FormatError("config: unknown key '" + key + "'");
    }
}

SweepConfig SweepConfig::parse(std::istream& is) {
    SweepConfig cfg;
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const std::string text = trim(raw.substr(0, raw.find('#')));
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw FormatError("config line " + std::to_string(line) + ": expected 'key = value'");
        }
        try {
            cfg.set(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
        } catch (const FormatError& e) {
            throw FormatError("config line " + std::to_string(line) + ": " + e.what());
        }
    }
    return cfg;
}

SweepConfig SweepConfig::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw IoError("cannot open config '" + path.string() + "'");
    }
    return parse(is);
}

std::string SweepConfig::to_text() const {
    std::ostringstream os;
    os << "channel = " << to_string(channel) << '\n';
    os << "doppler_hz = " << join_reals(doppler_hz) << '\n';
    os << "snr_db = " << join_reals(snr_db) << '\n';
    os << "num_slots = " << num_slots << '\n';
    os << "methods = ";
    for (std::size_t i = 0; i < methods.size(); ++i) {
        os << (i ? ", " : "") << to_string(methods[i]);
    }
    os << '\n';
    os << "perturbation = " << perturbation.describe() << '\n';
    os << "noise_mode = " << to_string(noise_mode) << '\n';
    os << "seed = " << seed << '\n';
    os << "delay_spread_s = " << format_real(delay_spread_s) << '\n';
    os << "subcarrier_spacing_hz = " << format_real(subcarrier_spacing_hz) << '\n';
    os << "F = " << F << "\nS = " << S << "\nNr = " << Nr << '\n';
    os << "iterations = " << iterations << '\n';
    os << "eval_split = " << (eval_split == EvalSplit::test ? "test" : "all") << '\n';
    if (!backbone_params.empty()) {
        os << "backbone_params = " << backbone_params << '\n';
    }
    if (!dataset.empty()) {
        os << "dataset = " << dataset << '\n';
    }
    os << "threads = " << threads << '\n';
    os << "record_wall_time = " << (record_wall_time ? "true" : "false") << '\n';
    return os.str();
}

double channel_mse(const ChannelGrid& h_est, const ChannelGrid& h_true) {
    require_same_shape(h_est.dims(), h_true.dims(), "channel_mse");
    const double ref = h_true.squared_norm();
    if (!(ref > 0.0)) {
        throw NumericError("channel_mse: true channel has zero energy");
    }
    double err = 0.0;
    for (int r = 0; r < h_true.Nr(); ++r) {
        err += (h_est.antenna(r) - h_true.antenna(r)).squaredNorm();
    }
    return err / ref;
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();

    std::optional<BackboneParams> file_params;
    if (!config.backbone_params.empty()) {
        file_params = load_params(config.backbone_params);
        file_params->validate(config.F, config.S);
    }

    Dataset stored;
    std::vector<double> dopplers = config.doppler_hz;
    std::vector<double> snrs = config.snr_db;
    std::string channel_tag(to_string(config.channel));
    ChannelParams base{config.channel,
                       0.0,
                       config.delay_spread_s,
                       config.subcarrier_spacing_hz,
                       default_symbol_duration(config.subcarrier_spacing_hz),
                       config.F,
                       config.S,
                       config.Nr};
    if (!config.dataset.empty()) {
        stored = read_dataset(config.dataset);
        const auto& m = stored.manifest;
        if (m.dims() != base.dims()) {
            throw ShapeError("run_sweep: dataset dimensions differ from the config");
        }
        dopplers = {m.doppler_hz};
        snrs = {m.snr_db};
        channel_tag = m.channel_tag;
        base.model = parse_channel_model(m.channel_tag);
        base.delay_spread_s = m.delay_spread_s;
    }

    const PilotPattern pilots(config.F);
    SweepResult result;

    for (std::size_t di = 0; di < dopplers.size(); ++di) {
        ChannelParams params = base;
        params.doppler_hz = dopplers[di];
        Group g;
        g.doppler_hz = dopplers[di];
        g.synth.emplace(params);
        const CorrelationMatrices& corr = g.synth->correlation();
        const CVector& x_pilot = g.synth->pilot_symbols();
        int total = config.num_slots;
        if (!config.dataset.empty()) {
            g.stored = &stored.slots;
            total = static_cast<int>(stored.slots.size());
        }
        if (config.eval_split == EvalSplit::test) {
            const std::uint64_t split_seed = config.dataset.empty() ? config.seed : stored.manifest.master_seed;
            g.eval = split_dataset(total, split_seed).test;
        } else {
            g.eval.resize(static_cast<std::size_t>(total));
            std::iota(g.eval.begin(), g.eval.end(), 0);
        }
        const CorrelationSpec spec = correlation_for(params);

        for (double snr : snrs) {
            const double sigma2 = sigma2_from_snr_db(snr);
            const WienerFilters shared = WienerFilters::build(corr.rf, corr.rs, pilots, sigma2);
            const BackboneParams shared_bb =
                file_params ? *file_params : BackboneParams::uniform(std::sqrt(std::max(sigma2, kMinNoiseVariance)), spec);
            std::optional<WienerOperatorSet> shared_ops;
            if (std::find(config.methods.begin(), config.methods.end(), Method::backbone) != config.methods.end()) {
                shared_ops = build_operators(shared_bb, pilots);
            }

            const std::size_t n_eval = g.eval.size();
            const std::size_t n_methods = config.methods.size();
            std::vector<SlotOutcome> outcomes(n_eval * n_methods);

            parallel_for(n_eval, config.threads, [&](std::size_t k) {
                const int idx = g.eval[k];
                const std::uint64_t slot_seed = derive_seed(config.seed, {di, static_cast<std::uint64_t>(idx)});
                Slot slot;
                CVector xp = x_pilot;
                try {
                    if (g.stored != nullptr) {
                        slot = (*g.stored)[static_cast<std::size_t>(idx)];
                        for (int p = 0; p < pilots.count(); ++p) {
                            xp(p) = hard_project(slot.x(pilots.subcarriers()[static_cast<std::size_t>(p)], 0));
                        }
                    } else {
                        slot = g.synth->synthesize(snr, slot_seed);
                    }
                    Rng prng(derive_seed(config.seed, {di, static_cast<std::uint64_t>(idx), kPerturbStream}));
                    slot.y = config.perturbation.apply(slot.y, prng);
                } catch (const std::exception& e) {
                    for (std::size_t mi = 0; mi < n_methods; ++mi) {
                        outcomes[k * n_methods + mi].failure = e.what();
                    }
                    return;
                }

                std::optional<WienerFilters> local;
                double s2 = slot.sigma2;
                std::optional<std::string> setup_error;
                try {
                    if (config.noise_mode == NoiseMode::estimated) {
                        s2 = estimate_noise_variance(slot.y, pilots, xp, corr.rf);
                    }
                    if (s2 != shared.sigma2) {
                        local = WienerFilters::build(corr.rf, corr.rs, pilots, s2);
                    }
                } catch (const std::exception& e) {
                    setup_error = e.what();
                }
                const WienerFilters& filters = local ? *local : shared;

                for (std::size_t mi = 0; mi < n_methods; ++mi) {
                    SlotOutcome& out = outcomes[k * n_methods + mi];
                    if (setup_error) {
                        out.failure = setup_error;
                        continue;
                    }
                    const auto t0 = std::chrono::steady_clock::now();
                    try {
                        BitGrid bits;
                        ChannelGrid h;
                        switch (config.methods[mi]) {
                            case Method::noniterative: {
                                auto r = run_noniterative(slot.y, pilots, xp, filters);
                                bits = std::move(r.bits_hard);
                                h = std::move(r.h_est);
                                break;
                            }
                            case Method::iterative: {
                                auto r = run_iterative(slot.y, pilots, xp, filters, config.iterations);
                                bits = std::move(r.bits_hard);
                                h = std::move(r.h_est);
                                break;
                            }
                            case Method::backbone: {
                                BackboneOutput r;
                                if (file_params || s2 == shared.sigma2) {
                                    r = backbone_forward(slot.y, pilots, xp, shared_bb, *shared_ops);
                                } else {
                                    r = backbone_forward(slot.y, pilots, xp,
                                                         BackboneParams::uniform(std::sqrt(std::max(s2, kMinNoiseVariance)), spec));
                                }
                                bits = symbols_to_bits(hard_project(r.x_soft));
                                h = std::move(r.h_est);
                                break;
                            }
                        }
                        out.errors = bit_error_count(bits, slot.bits, pilots);
                        out.mse = channel_mse(h, slot.h);
                    } catch (const std::exception& e) {
                        out.failure = e.what();
                    }
                    if (config.record_wall_time) {
                        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    }
                }
            });

            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                ReportRow row;
                row.method = std::string(to_string(config.methods[mi]));
                row.channel = channel_tag;
                row.doppler_hz = g.doppler_hz;
                row.snr_db = snr;
                row.perturbation = config.perturbation.describe();
                std::optional<std::string> failure;
                double mse_sum = 0.0;
                for (std::size_t k = 0; k < n_eval; ++k) {
                    const SlotOutcome& o = outcomes[k * n_methods + mi];
                    if (o.failure) {
                        failure = "slot " + std::to_string(g.eval[k]) + ": " + *o.failure;
                        break;
                    }
                    row.num_bits += o.errors.total;
                    row.bit_errors += o.errors.errors;
                    mse_sum += o.mse;
                    row.wall_time_s += o.seconds;
                }
                if (failure || n_eval == 0) {
                    result.failures.push_back(
                        {row.method, row.doppler_hz, row.snr_db, failure.value_or("no slots to evaluate")});
                    continue;
                }
                row.ber = static_cast<double>(row.bit_errors) / static_cast<double>(row.num_bits);
                row.channel_mse = mse_sum / static_cast<double>(n_eval);
                result.rows.push_back(std::move(row));
            }
        }
    }
    return result;
}

}  // namespace jcesd
