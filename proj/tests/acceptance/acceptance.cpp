// Copyright 2026 The retrocap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "retrocap/choi.hpp"
#include "retrocap/entropy.hpp"
#include "retrocap/errors.hpp"
#include "retrocap/estimators.hpp"
#include "retrocap/ladder.hpp"
#include "retrocap/protocols.hpp"

using namespace retrocap;

namespace {

std::string fmt(const char *pattern, ...) __attribute__((format(printf, 1, 2)));

std::string fmt(const char *pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof(buf), pattern, args);
    va_end(args);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what;
        if (!ok) {
            pass = false;
            detail += " [failed]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

Outcome holevo_r22() {
    Outcome o;
    const double target = 1 + (std::numbers::pi * std::numbers::pi / 18 - 5.0 / 6) / std::numbers::ln2;
    auto t0 = std::chrono::steady_clock::now();
    Estimate e = holevo_retro_mc(2, 2, 1000000, 20260101, 1);
    double elapsed = seconds_since(t0);
    o.require(std::abs(e.mean - target) <= 3 * e.std_error,
              fmt("C_H = %.6f +- %.6f vs %.7f (%.2f sigma)", e.mean, e.std_error, target, (e.mean - target) / e.std_error));
    o.require(e.std_error <= 5e-4, fmt("stderr %.2e <= 5e-4", e.std_error));
    o.require(elapsed < 60, fmt("%.1f s single worker", elapsed));
    return o;
}

Outcome coherent_r22() {
    Outcome o;
    Estimate e = coherent_info_retro_mc(2, 2, 1000000, 20260102, 1);
    o.require(std::abs(e.mean - 0.4262) <= 3 * e.std_error,
              fmt("I_c = %.6f +- %.6f vs 0.4262 (%.2f sigma)", e.mean, e.std_error, (e.mean - 0.4262) / e.std_error));
    return o;
}

Outcome echo_protocols() {
    Outcome o;
    using Runner = ProtocolResult (*)(const ProtocolOptions &);
    const std::pair<const char *, Runner> runs[] = {{"fig2", run_fig2}, {"fig3", run_fig3}, {"fig4", run_fig4}};
    std::uint64_t trials = 0;
    double worst = 1;
    std::uint64_t mismatches = 0;
    bool all = true;
    for (std::size_t d : {2, 3, 5}) {
        for (const auto &[name, runner] : runs) {
            ProtocolOptions p;
            p.d = d;
            p.trials = 1000;
            p.seed = 100 + d;
            p.strict = false;
            ProtocolResult r = runner(p);
            trials += r.trials;
            worst = std::min(worst, r.min_fidelity);
            mismatches += r.echo_mismatches;
            bool ok = r.trials >= 1000 && r.fidelity_failures == 0 && r.echo_mismatches == 0 && r.echo_checks == r.trials;
            if (!ok) {
                o.require(false, fmt("%s d=%zu: min fidelity %.3e, %llu echo mismatches", name, d, r.min_fidelity,
                                     static_cast<unsigned long long>(r.echo_mismatches)));
            }
            all = all && ok;
        }
    }
    o.require(all, fmt("%llu trials over d in {2,3,5}, min fidelity 1 - %.1e", static_cast<unsigned long long>(trials), 1 - worst));
    o.require(mismatches == 0, "echo audit j' = j in every trial");
    return o;
}

Outcome compositions() {
    Outcome o;
    ProtocolOptions p;
    p.trials = 1000;
    p.seed = 7;
    p.strict = false;
    ProtocolResult q = compose_qubit_2S_back(p);
    o.require(q.fidelity_failures == 0 && q.min_fidelity >= 1 - 1e-9,
              fmt("qubit via 2 uses: min fidelity 1 - %.1e over %llu trials", 1 - q.min_fidelity,
                  static_cast<unsigned long long>(q.trials)));
    o.require(q.ledger.channel_uses == 2 && q.ledger.forward_messages == 0, "ledger: 2 uses, back messages only");
    SuperdenseResult s = compose_2cbits_3S_back(p);
    bool each = true;
    for (std::size_t m = 0; m < 4; m++) {
        each = each && s.trials_by_message[m] == 1000 && s.errors_by_message[m] == 0;
    }
    o.require(each && s.bit_errors == 0, "superdense: 4 messages x 1000 trials, 0 bit errors");
    o.require(s.ledger.channel_uses == 3, fmt("ledger shows %llu channel uses", static_cast<unsigned long long>(s.ledger.channel_uses)));
    o.require(s.independence_ok, "side messages independent of the message");
    return o;
}

Outcome simplified_channel() {
    Outcome o;
    SimplifiedChannelSpec spec;
    const double expected = 0.5 + 0.5 * (1 - binary_entropy(0.25));
    double closed = simplified_chi(spec, simplified_control(0));
    o.require(std::abs(closed - expected) <= 1e-12, fmt("closed form at |0> = %.9f (expected %.9f)", closed, expected));
    Estimate mc = simplified_chi_mc(spec, simplified_control(0), 400000, 55, 1);
    o.require(std::abs(mc.mean - closed) <= 3 * mc.std_error, fmt("Monte Carlo %.6f +- %.6f", mc.mean, mc.std_error));
    ChiScan scan = simplified_chi_scan(spec, 256, 200000, 56, 1);
    bool checks = !scan.cross_checks.empty();
    for (const auto &c : scan.cross_checks) {
        checks = checks && c.agrees;
    }
    o.require(scan.curve.size() == 256 && checks, "256-point curve emitted, 3 cross-checks agree");
    o.require(scan.eigenstate_claim_violated,
              fmt("flagged finding: curve max %.6f at t = %.4f exceeds eigenstate value %.6f", scan.max_value, scan.argmax_t,
                  scan.eigenstate_value));
    return o;
}

Outcome dephased_channel() {
    Outcome o;
    PptResult ppt = is_ppt(choi_matrix(RetroChannelSpec::pauli_discretization(RetroVariant::dephased)));
    o.require(ppt.ppt && ppt.min_eigenvalue >= -1e-10, fmt("discretized Choi PPT, min eigenvalue %.2e", ppt.min_eigenvalue));
    ProtocolOptions p;
    p.trials = 10000;
    p.seed = 61;
    p.strict = false;
    DephasedC2Result r = run_dephased_c2(p);
    o.require(r.bits_sent == 10000 && r.bit_errors == 0, "10^4 random bits, 0 errors");
    o.require(r.independence_ok, "message-independence audit passed");
    McOptions mc;
    mc.samples = 1000000;
    mc.seed = 62;
    Estimate deph = holevo_retro_mc(RetroChannelSpec::dephased(2, 2), mc);
    mc.seed = 63;
    Estimate std_ = holevo_retro_mc(RetroChannelSpec::standard(2, 2), mc);
    double joint = std::hypot(deph.std_error, std_.std_error);
    o.require(std::abs(deph.mean - std_.mean) <= 3 * joint,
              fmt("C_H dephased %.6f vs standard %.6f (joint stderr %.1e)", deph.mean, std_.mean, joint));
    return o;
}

Outcome erasure_conversion() {
    Outcome o;
    SimplifiedChannelSpec spec;
    ProtocolOptions p;
    p.trials = 100000;
    p.seed = 71;
    p.strict = false;
    p.keep_traces = 0;
    ErasureResult r = erasure_conversion_mes(spec, p);
    double sigma = std::sqrt(0.25 / static_cast<double>(r.trials));
    o.require(r.misses == 0, "0 missed depolarizations in 10^5 trials");
    o.require(std::abs(r.erasure_fraction - 0.5) <= 3 * sigma, fmt("erasure fraction %.5f (binomial stderr %.1e)", r.erasure_fraction, sigma));
    CapacityReport report{"simplified", {}};
    report.add({CapacityKind::Q_2, EvidenceTag::protocol_lower_bound, Precision::exact, 0.5, 0, r.trials, r.seed, "erasure-mes"});
    auto q2 = report.find(CapacityKind::Q_2, EvidenceTag::protocol_lower_bound);
    o.require(q2 && q2->value >= 0.5 && r.q2_lower_bound >= 0.5 - 3 * sigma, "Q_2 >= 0.5 recorded as protocol-lower-bound");
    FlaggedOptimum f = optimize_flagged_rate(spec, 100, 100000, 72, 1);
    const double target = 2 - std::sqrt(2.0);
    o.require(f.grid_points >= 10000 && std::abs(f.rate - target) <= 1e-6,
              fmt("flagged optimum %.9f vs 2 - sqrt 2 over %zu grid points", f.rate, f.grid_points));
    o.require(f.simulation.misses == 0 && std::abs(f.simulation.rate.mean - f.rate) <= 3 * f.simulation.rate.std_error,
              fmt("zero-miss simulation %.5f +- %.5f", f.simulation.rate.mean, f.simulation.rate.std_error));
    return o;
}

Outcome trend() {
    Outcome o;
    const std::vector<std::size_t> dims{2, 4, 8, 16};
    auto rows = trend_scan(dims, 5000, 81, 1);
    std::string line;
    bool decreasing = true;
    for (std::size_t k = 0; k < rows.size(); k++) {
        line += fmt("%s(%zu,%zu)=%.5f", k ? " " : "", rows[k].d, rows[k].c, rows[k].estimate.mean);
        if (k > 0) {
            double gap = rows[k - 1].estimate.mean - rows[k].estimate.mean;
            decreasing = decreasing && gap > 3 * std::hypot(rows[k - 1].estimate.std_error, rows[k].estimate.std_error);
        }
    }
    o.require(decreasing, line + ", each step > 3 joint stderr");
    return o;
}

Outcome ladder() {
    Outcome o;
    ReportOptions opts;
    opts.samples = 200000;
    opts.trials = 1000;
    opts.seed = 91;
    CapacityReport id = identity_qubit_report(opts);
    CapacityReport bit = classical_bit_report(opts);
    CapacityReport r22 = retro22_report(opts);
    auto value = [](const CapacityReport &r, CapacityKind k) {
        auto e = r.find(k, EvidenceTag::computed);
        return e ? e->value : std::nan("");
    };
    double ce = value(id, CapacityKind::C_E);
    o.require(std::abs(ce - 2) <= 1e-3 && std::abs(value(id, CapacityKind::Q_E) - ce / 2) <= 1e-12,
              fmt("identity qubit C_E = %.6f, Q_E = C_E/2", ce));
    double bit_ch = value(bit, CapacityKind::C_H);
    double bit_ce = value(bit, CapacityKind::C_E);
    bool quantum_zero = true;
    for (auto k : {CapacityKind::I_c, CapacityKind::Q, CapacityKind::Q_B, CapacityKind::Q_2}) {
        quantum_zero = quantum_zero && std::abs(value(bit, k)) <= 1e-9;
    }
    o.require(std::abs(bit_ch - 1) <= 1e-3 && std::abs(bit_ce - 1) <= 1e-3 && quantum_zero,
              fmt("classical bit C_H = %.6f, C_E = %.6f, quantum capacities 0", bit_ch, bit_ce));
    bool headline = false;
    for (const auto &s : headline_separations({r22})) {
        if (s.bound_kind == CapacityKind::Q_2) {
            headline = s.established;
            o.require(s.established, fmt("R22 Q_2 >= %.0f exceeds C_H = %.5f by %.0f stderr", s.bound, s.holevo, s.sigmas));
        }
    }
    if (!headline) {
        o.require(false, "R22 headline separation");
    }
    LadderResult res = check_ladder({id, bit, r22});
    o.require(res.violations.empty(), fmt("%zu ladder checks, %zu violations", res.checks.size(), res.violations.size()));
    return o;
}

std::string read_file(const std::filesystem::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome determinism() {
    Outcome o;
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / ("retrocap_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> commands{
        {"holevo", "holevo --c 2 --d 2 --samples 20000 --seed 7"},
        {"coherent", "coherent --c 3 --d 2 --samples 20000 --seed 7"},
        {"protocol", "protocol --name sd-3s-back --trials 50 --seed 3"},
        {"erasure", "protocol --name erasure-mes --trials 5000 --seed 3"},
        {"flagged", "protocol --name flagged-opt --trials 5000 --seed 3"},
        {"trend", "trend --dims 2,4,8 --samples 2000 --seed 5"},
        {"scan", "simplified-scan --resolution 64 --mc-samples 5000 --seed 9"},
        {"report", "report --channel retro-2-2 --samples 5000 --trials 50 --seed 11"},
    };
    std::size_t identical = 0;
    for (const auto &[tag, args] : commands) {
        std::vector<std::string> outputs;
        for (const char *workers : {"1", "1", "3"}) {
            fs::path out = dir / (tag + "_" + std::to_string(outputs.size()) + ".out");
            std::string cmd = std::string(RETROCAP_CLI) + " " + args + " --workers " + workers + " --out " + out.string();
            int rc = std::system(cmd.c_str());
            if (rc != 0) {
                o.require(false, tag + ": exit status " + std::to_string(rc));
            }
            outputs.push_back(read_file(out));
        }
        bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
        if (!same) {
            o.require(false, tag + ": outputs differ");
        }
        identical += same;
    }
    fs::remove_all(dir);
    o.require(identical == commands.size(),
              fmt("%zu/%zu commands byte-identical across repeats and 1 vs 3 workers", identical, commands.size()));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"C_H(R22) Monte Carlo matches the closed form", holevo_r22},
        {"coherent information of R22", coherent_r22},
        {"echo protocols exact for d in {2,3,5}", echo_protocols},
        {"composed protocols", compositions},
        {"simplified channel chi and scan", simplified_channel},
        {"dephased channel: PPT, C_2 protocol, C_H", dephased_channel},
        {"erasure conversion and flagged optimum", erasure_conversion},
        {"C_H trend over d", trend},
        {"capacity ladder checks", ladder},
        {"CLI determinism", determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); k++) {
        Outcome out;
        auto t0 = std::chrono::steady_clock::now();
        try {
            out = criteria[k].second();
        } catch (const std::exception &e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        failures += !out.pass;
        std::printf("%s %zu: %s (%.1f s): %s\n", out.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, seconds_since(t0),
                    out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
