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


// jcesd command-line front end. Every flag can also be set through an
// environment variable named JCESD_<FLAG> (upper case, dashes as underscores).

#include "jcesd/channel.hpp"
#include "jcesd/dataset.hpp"
#include "jcesd/flops.hpp"
#include "jcesd/harness.hpp"
#include "jcesd/perturb.hpp"
#include "jcesd/rng.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace jcesd;

constexpr int kExitPartial = 2;

struct GenerateArgs {
    std::string out;
    std::string channel = "kronecker";
    double doppler = 0.0;
    double snr = 20.0;
    int num_slots = 600;
    std::uint64_t seed = 1;
    double delay_spread = 100e-9;
};

struct RunArgs {
    std::string config;
    std::vector<std::string> overrides;
    std::string out;
    std::string format = "csv";
};

struct PerturbArgs {
    std::string in;
    std::string out;
    std::string perturbation;
    std::uint64_t seed = 1;
};

struct ReportArgs {
    std::vector<std::string> inputs;
    std::string out;
    std::string format;
};

struct FlopsArgs {
    int F = 24;
    int S = 12;
    int Nr = 4;
    int iterations = 6;
};

int cmd_generate(const GenerateArgs& a) {
    ChannelParams p;
    p.model = parse_channel_model(a.channel);
    p.doppler_hz = a.doppler;
    p.delay_spread_s = a.delay_spread;
    const SlotSynthesizer synth(p);
    std::vector<Slot> slots;
    slots.reserve(static_cast<std::size_t>(a.num_slots));
    for (int k = 0; k < a.num_slots; ++k) {
        slots.push_back(synth.synthesize(a.snr, derive_seed(a.seed, {0, static_cast<std::uint64_t>(k)})));
    }
    DatasetManifest m;
    m.F = p.F;
    m.S = p.S;
    m.Nr = p.Nr;
    m.channel_tag = a.channel;
    m.doppler_hz = a.doppler;
    m.snr_db = a.snr;
    m.delay_spread_s = a.delay_spread;
    m.master_seed = a.seed;
    write_dataset(a.out, m, slots);
    std::cerr << "wrote " << slots.size() << " slots to " << a.out << '\n';
    return 0;
}

int cmd_run(const RunArgs& a) {
    SweepConfig cfg;
    if (!a.config.empty()) {
        cfg = SweepConfig::load(a.config);
    }
    for (const auto& kv : a.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw FormatError("--set expects key=value, got '" + kv + "'");
        }
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    const SweepResult res = run_sweep(cfg);
    for (const auto& f : res.failures) {
        std::cerr << "row failed: method=" << f.method << " doppler_hz=" << format_real(f.doppler_hz)
                  << " snr_db=" << format_real(f.snr_db) << ": " << f.message << '\n';
    }
    if (a.out.empty()) {
        if (parse_report_format(a.format) == ReportFormat::csv) {
            write_csv(std::cout, res.rows);
        } else {
            write_json(std::cout, res.rows);
        }
    } else {
        emit_report(res.rows, parse_report_format(a.format), a.out);
    }
    return res.failures.empty() ? 0 : kExitPartial;
}

int cmd_perturb(const PerturbArgs& a) {
    const Perturbation p = Perturbation::parse(a.perturbation);
    Dataset ds = read_dataset(a.in);
    for (std::size_t k = 0; k < ds.slots.size(); ++k) {
        Rng rng(derive_seed(a.seed, {static_cast<std::uint64_t>(k)}));
        ds.slots[k].y = p.apply(ds.slots[k].y, rng);
    }
    const std::string desc = p.describe();
    ds.manifest.perturbation = ds.manifest.perturbation == "none" ? desc : ds.manifest.perturbation + ";" + desc;
    write_dataset(a.out, ds.manifest, ds.slots);
    std::cerr << "applied " << desc << " to " << ds.slots.size() << " slots, wrote " << a.out << '\n';
    return 0;
}

int cmd_report(const ReportArgs& a) {
    std::vector<ReportRow> rows;
    for (const auto& in : a.inputs) {
        auto part = load_report(in);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const ReportFormat fmt = !a.format.empty()  ? parse_report_format(a.format)
                             : !a.out.empty() ? report_format_for(a.out)
                                              : ReportFormat::csv;
    if (a.out.empty()) {
        if (fmt == ReportFormat::csv) {
            write_csv(std::cout, rows);
        } else {
            write_json(std::cout, rows);
        }
    } else {
        emit_report(rows, fmt, a.out);
    }
    return 0;
}

int cmd_flops(const FlopsArgs& a) {
    const FlopReport r = flop_report(a.F, a.S, a.Nr, a.iterations);
    std::cout << r.describe();
    std::cout << "method,flops\n";
    std::cout << "noniterative," << r.noniterative << '\n';
    std::cout << "iterative," << r.iterative << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", static_cast<double>(r.iterative) / static_cast<double>(r.noniterative));
    std::cout << "# ratio " << buf << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-level SIMO-OFDM receiver simulation and benchmark"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Synthesize slots and write a dataset file");
    g->add_option("-o,--out", gen.out, "Output dataset path")->required()->envname("JCESD_OUT");
    g->add_option("--channel", gen.channel, "kronecker or iid")->envname("JCESD_CHANNEL");
    g->add_option("--doppler", gen.doppler, "Maximum Doppler shift in Hz")->envname("JCESD_DOPPLER");
    g->add_option("--snr", gen.snr, "Per-antenna SNR in dB")->envname("JCESD_SNR");
    g->add_option("-n,--num-slots", gen.num_slots, "Number of slots")->check(CLI::PositiveNumber)->envname("JCESD_NUM_SLOTS");
    g->add_option("--seed", gen.seed, "Master seed")->envname("JCESD_SEED");
    g->add_option("--delay-spread", gen.delay_spread, "RMS delay spread in seconds")->envname("JCESD_DELAY_SPREAD");

    RunArgs run;
    auto* r = app.add_subcommand("run", "Run a receiver sweep from a config document");
    r->add_option("-c,--config", run.config, "Config file (key = value lines)")->envname("JCESD_CONFIG");
    r->add_option("--set", run.overrides, "Override a config key, key=value (repeatable)")->envname("JCESD_SET");
    r->add_option("-o,--out", run.out, "Report path (default: stdout)")->envname("JCESD_OUT");
    r->add_option("--format", run.format, "csv or json")->envname("JCESD_FORMAT");

    PerturbArgs pert;
    auto* p = app.add_subcommand("perturb", "Apply CFO or asymmetric noise to a dataset");
    p->add_option("-i,--in", pert.in, "Input dataset")->required()->envname("JCESD_IN");
    p->add_option("-o,--out", pert.out, "Output dataset")->required()->envname("JCESD_OUT");
    p->add_option("--perturbation", pert.perturbation, "cfo:<Hz> or asym_noise:<s1sq>,<s2sq>")
        ->required()
        ->envname("JCESD_PERTURBATION");
    p->add_option("--seed", pert.seed, "Seed for the noise draws")->envname("JCESD_SEED");

    ReportArgs rep;
    auto* rp = app.add_subcommand("report", "Merge and convert report files");
    rp->add_option("inputs", rep.inputs, "Report files (.csv or .json)")->required()->envname("JCESD_INPUTS");
    rp->add_option("-o,--out", rep.out, "Output path (default: stdout)")->envname("JCESD_OUT");
    rp->add_option("--format", rep.format, "csv or json (default: from extension)")->envname("JCESD_FORMAT");

    FlopsArgs fl;
    auto* f = app.add_subcommand("flops", "Print FLOP counts of the classical receivers");
    f->add_option("--F", fl.F, "Subcarriers")->envname("JCESD_F");
    f->add_option("--S", fl.S, "OFDM symbols")->envname("JCESD_S");
    f->add_option("--Nr", fl.Nr, "Receive antennas")->envname("JCESD_NR");
    f->add_option("--iterations", fl.iterations, "Iterations of the iterative receiver")->envname("JCESD_ITERATIONS");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*g) {
            return cmd_generate(gen);
        }
        if (*r) {
            return cmd_run(run);
        }
        if (*p) {
            return cmd_perturb(pert);
        }
        if (*rp) {
            return cmd_report(rep);
        }
        if (*f) {
            return cmd_flops(fl);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
