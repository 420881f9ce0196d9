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

#include "retrocap/ladder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "retrocap/choi.hpp"
#include "retrocap/entropy.hpp"
#include "retrocap/errors.hpp"
#include "retrocap/protocols.hpp"

namespace retrocap {

std::string_view to_string(RelationStatus s) {
    switch (s) {
        case RelationStatus::saturable_inequality:
            return "saturable-inequality";
        case RelationStatus::strict_inequality:
            return "strict-inequality";
        case RelationStatus::incomparable:
            return "incomparable";
    }
    return "unknown";
}

std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::verified_numerically:
            return "verified-numerically";
        case CheckStatus::protocol_witnessed:
            return "protocol-witnessed";
        case CheckStatus::recorded_only:
            return "recorded-only";
    }
    return "unknown";
}

std::string_view to_string(WitnessRole r) {
    switch (r) {
        case WitnessRole::equality:
            return "equality";
        case WitnessRole::both_zero:
            return "both-zero";
        case WitnessRole::separation:
            return "separation";
        case WitnessRole::reverse_separation:
            return "reverse-separation";
    }
    return "unknown";
}

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N> &values, const char *what) {
    for (E v : values) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw DomainError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace

RelationStatus relation_status_from_string(std::string_view s) {
    return parse_enum(
        s,
        std::array{RelationStatus::saturable_inequality, RelationStatus::strict_inequality, RelationStatus::incomparable},
        "relation status");
}

CheckStatus check_status_from_string(std::string_view s) {
    return parse_enum(
        s,
        std::array{CheckStatus::verified_numerically, CheckStatus::protocol_witnessed, CheckStatus::recorded_only},
        "check status");
}

WitnessRole witness_role_from_string(std::string_view s) {
    return parse_enum(
        s,
        std::array{WitnessRole::equality, WitnessRole::both_zero, WitnessRole::separation, WitnessRole::reverse_separation},
        "witness role");
}

std::vector<Relation> build_ladder() {
    using K = CapacityKind;
    using R = RelationStatus;
    using W = WitnessRole;
    using S = CheckStatus;
    const std::string additivity = "additivity of C_H, so that C = C_H";
    return {
        {"a",
         K::C_2,
         K::C_E,
         R::saturable_inequality,
         0,
         {{"classical-bit", W::equality, S::verified_numerically, ""},
          {"identity-qubit", W::separation, S::verified_numerically, ""}},
         S::verified_numerically,
         ""},
        {"b",
         K::C_B,
         K::C_2,
         R::saturable_inequality,
         0,
         {{"classical-bit", W::equality, S::verified_numerically, ""},
          {"dephased-retro-2-2", W::separation, S::protocol_witnessed, "C_B = C = C_H for the dephased channel"}},
         S::protocol_witnessed,
         ""},
        {"c",
         K::C,
         K::C_B,
         R::saturable_inequality,
         0,
         {{"classical-bit", W::equality, S::verified_numerically, ""},
          {"retro-2-2", W::separation, S::recorded_only, additivity}},
         S::recorded_only,
         additivity},
        {"d",
         K::Q,
         K::Q_B,
         R::saturable_inequality,
         0,
         {{"identity-qubit", W::equality, S::verified_numerically, ""},
          {"high-dimensional retrocorrectable channels", W::separation, S::recorded_only, ""}},
         S::recorded_only,
         ""},
        {"e",
         K::Q_B,
         K::Q_2,
         R::saturable_inequality,
         0,
         {{"identity-qubit", W::equality, S::verified_numerically, ""},
          {"retro-2-2", W::separation, S::recorded_only, "conjectured; would follow from incomparability k"}},
         S::recorded_only,
         "separation conjectured"},
        {"f",
         K::Q_2,
         K::Q_E,
         R::saturable_inequality,
         0,
         {{"identity-qubit", W::equality, S::verified_numerically, ""},
          {"strongly depolarizing channel", W::separation, S::recorded_only, "Q_2 = 0 while C > 0"}},
         S::recorded_only,
         ""},
        {"g",
         K::Q_E,
         K::C_E,
         R::strict_inequality,
         2,
         {{"identity-qubit", W::separation, S::verified_numerically, ""},
          {"fully depolarizing channel", W::both_zero, S::recorded_only, ""}},
         S::verified_numerically,
         ""},
        {"h",
         K::Q,
         K::C,
         R::saturable_inequality,
         0,
         {{"classical-bit", W::separation, S::verified_numerically, ""}},
         S::verified_numerically,
         ""},
        {"h",
         K::Q_B,
         K::C_B,
         R::saturable_inequality,
         0,
         {{"classical-bit", W::separation, S::verified_numerically, ""}},
         S::verified_numerically,
         ""},
        {"h",
         K::Q_2,
         K::C_2,
         R::saturable_inequality,
         0,
         {{"classical-bit", W::separation, S::verified_numerically, ""}},
         S::verified_numerically,
         ""},
        {"i",
         K::C_2,
         K::Q_E,
         R::incomparable,
         0,
         {{"depolarizing-2/3", W::separation, S::recorded_only, "C_2 = C_H for this channel"},
          {"classical-bit", W::reverse_separation, S::verified_numerically, ""}},
         S::recorded_only,
         "C_2 = C_H for the 2/3 depolarizing channel"},
        {"j",
         K::C,
         K::Q_E,
         R::incomparable,
         0,
         {{"retro-2-2", W::separation, S::recorded_only, additivity},
          {"classical-bit", W::reverse_separation, S::verified_numerically, ""}},
         S::recorded_only,
         additivity},
        {"k",
         K::C_B,
         K::Q_2,
         R::incomparable,
         0,
         {{"retro-2-2", W::separation, S::recorded_only, "conjectured; needs an upper bound on C_B below 1"},
          {"classical-bit", W::reverse_separation, S::verified_numerically, ""}},
         S::recorded_only,
         "conjectured direction C_B < Q_2"},
        {"l",
         K::C,
         K::Q_B,
         R::incomparable,
         0,
         {{"high-dimensional retrocorrectable channels", W::separation, S::recorded_only, additivity},
          {"classical-bit", W::reverse_separation, S::verified_numerically, ""}},
         S::recorded_only,
         additivity},
    };
}

namespace {

constexpr std::size_t kKinds = 10;

std::size_t idx(CapacityKind k) {
    return static_cast<std::size_t>(k);
}

/// The ladder capacity an entry bounds from below, if any.
std::optional<CapacityKind> lower_bound_kind(const CapacityEntry &e) {
    if (e.tag == EvidenceTag::paper_reported_unverified) {
        return std::nullopt;
    }
    if (e.kind == CapacityKind::C_H) {
        return e.tag == EvidenceTag::computed ? std::optional(CapacityKind::C) : std::nullopt;
    }
    if (e.kind == CapacityKind::I_c) {
        return e.tag == EvidenceTag::computed ? std::optional(CapacityKind::Q) : std::nullopt;
    }
    return e.kind;
}

bool is_value(const CapacityEntry &e) {
    return e.tag == EvidenceTag::computed && e.kind != CapacityKind::C_H && e.kind != CapacityKind::I_c;
}

double slack_for(const CapacityEntry &a, const CapacityEntry &b, const TolerancePolicy &p) {
    double s = p.exact;
    if (a.precision == Precision::optimizer || b.precision == Precision::optimizer) {
        s = std::max(s, p.optimizer);
    }
    if (a.precision == Precision::monte_carlo || b.precision == Precision::monte_carlo) {
        s = std::max(s, p.mc_sigmas * std::hypot(a.std_error, b.std_error));
    }
    return s;
}

struct Closure {
    std::array<std::array<bool, kKinds>, kKinds> le{};
    std::array<std::array<std::string, kKinds>, kKinds> note{};
};

Closure ladder_closure() {
    Closure c;
    for (std::size_t k = 0; k < kKinds; k++) {
        c.le[k][k] = true;
        c.note[k][k] = "bound";
    }
    for (const auto &r : build_ladder()) {
        if (r.status == RelationStatus::incomparable) {
            continue;
        }
        c.le[idx(r.first)][idx(r.second)] = true;
        c.note[idx(r.first)][idx(r.second)] = r.note;
    }
    for (std::size_t m = 0; m < kKinds; m++) {
        for (std::size_t a = 0; a < kKinds; a++) {
            for (std::size_t b = 0; b < kKinds; b++) {
                if (c.le[a][m] && c.le[m][b] && !c.le[a][b]) {
                    c.le[a][b] = true;
                    c.note[a][b] = "chain";
                }
            }
        }
    }
    return c;
}

}  // namespace

LadderResult check_ladder(const std::vector<CapacityReport> &reports, const TolerancePolicy &policy) {
    static const Closure closure = ladder_closure();
    LadderResult out;
    for (const auto &report : reports) {
        for (const auto &lo : report.entries) {
            auto lk = lower_bound_kind(lo);
            if (!lk) {
                continue;
            }
            for (const auto &hi : report.entries) {
                if (&lo == &hi || !is_value(hi) || !closure.le[idx(*lk)][idx(hi.kind)]) {
                    continue;
                }
                LadderCheck c{
                    report.channel,
                    closure.note[idx(*lk)][idx(hi.kind)],
                    lo.kind,
                    hi.kind,
                    lo.method,
                    hi.method,
                    lo.value,
                    hi.value,
                    slack_for(lo, hi, policy)};
                c.passed = c.lower_value <= c.upper_value + c.slack;
                out.checks.push_back(std::move(c));
            }
        }
        for (const auto &r : build_ladder()) {
            if (r.factor == 0) {
                continue;
            }
            auto a = report.find(r.first, EvidenceTag::computed);
            auto b = report.find(r.second, EvidenceTag::computed);
            if (!a || !b) {
                continue;
            }
            LadderCheck c{
                report.channel, r.note, a->kind, b->kind, a->method, b->method, r.factor * a->value, b->value,
                r.factor * slack_for(*a, *b, policy), true};
            c.passed = std::abs(c.lower_value - c.upper_value) <= c.slack;
            out.checks.push_back(std::move(c));
        }
    }
    for (const auto &c : out.checks) {
        if (!c.passed) {
            out.violations.push_back(c);
        }
    }
    return out;
}

std::vector<Separation> headline_separations(const std::vector<CapacityReport> &reports, const TolerancePolicy &policy) {
    std::vector<Separation> out;
    for (const auto &report : reports) {
        auto holevo = report.find(CapacityKind::C_H, EvidenceTag::computed);
        if (!holevo) {
            continue;
        }
        for (const auto &e : report.entries) {
            if (e.tag != EvidenceTag::protocol_lower_bound) {
                continue;
            }
            Separation s{report.channel, e.kind, e.method, e.value, holevo->value, holevo->std_error, 0, 0, false};
            s.margin = e.value - holevo->value;
            if (holevo->std_error > 0) {
                s.sigmas = s.margin / holevo->std_error;
            } else if (s.margin != 0) {
                s.sigmas = std::copysign(std::numeric_limits<double>::infinity(), s.margin);
            }
            s.established = holevo->std_error > 0 ? s.margin > policy.mc_sigmas * holevo->std_error : s.margin > policy.exact;
            out.push_back(std::move(s));
        }
    }
    return out;
}

double coherent_info(const KrausChannel &channel) {
    const std::size_t d = channel.input_dim();
    Matrix phi = StateVector::maximally_entangled(d).projector();
    Matrix joint = channel.apply_on_first(phi, d);
    Matrix out = channel.apply(Complex(1.0 / static_cast<double>(d)) * Matrix::identity(d));
    return entropy_bits(out) - entropy_bits(joint);
}

namespace {

std::string fmt(const char *pattern, double v) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

CapacityEntry exact_entry(CapacityKind kind, EvidenceTag tag, double value, std::string method) {
    return {kind, tag, Precision::exact, value, 0, 0, 0, std::move(method)};
}

CapacityEntry protocol_entry(CapacityKind kind, double rate, const ProtocolResult &r, std::string method) {
    return {kind, EvidenceTag::protocol_lower_bound, Precision::exact, rate, 0, r.trials, r.seed, std::move(method)};
}

void add_ea(CapacityReport &report, const KrausChannel &channel, std::uint64_t seed, std::size_t starts = 20) {
    EaOptions o;
    o.seed = seed;
    o.starts = starts;
    EaResult ea = maximize_ea(channel, o);
    report.add({CapacityKind::C_E, EvidenceTag::computed, Precision::optimizer, ea.value, 0, 0, seed,
                "multi-start coordinate ascent of the mutual information"});
    report.add({CapacityKind::Q_E, EvidenceTag::computed, Precision::optimizer, ea.value / 2, 0, 0, seed,
                "C_E / 2"});
}

ProtocolOptions protocol_options(const ReportOptions &o) {
    ProtocolOptions p;
    p.trials = o.trials;
    p.seed = o.seed;
    p.workers = o.workers;
    p.keep_traces = 0;
    return p;
}

KrausChannel simplified_with_flag(const SimplifiedChannelSpec &spec) {
    std::vector<Matrix> kraus;
    for (std::size_t b = 0; b < 2; b++) {
        Matrix flag(2, 1);
        flag(b, 0) = std::sqrt(0.5);
        KrausChannel n = simplified_flag_channel(spec, b);
        for (const auto &k : n.kraus()) {
            kraus.push_back(kron(k, flag));
        }
    }
    return KrausChannel("simplified", std::move(kraus));
}

}  // namespace

CapacityReport identity_qubit_report(const ReportOptions &o) {
    KrausChannel id = identity_qudit(2);
    CapacityReport r{"identity-qubit", {}};
    r.add(exact_entry(CapacityKind::C_H, EvidenceTag::computed, holevo_chi(id, Ensemble::basis_states(OrthonormalBasis::computational(2))),
                      "Holevo quantity of the computational basis ensemble"));
    r.add(exact_entry(CapacityKind::I_c, EvidenceTag::computed, coherent_info(id), "coherent information of a maximally entangled input"));
    add_ea(r, id, o.seed);
    r.add(exact_entry(CapacityKind::C_2, EvidenceTag::protocol_lower_bound, 1, "one basis state per use"));
    r.add(exact_entry(CapacityKind::Q_2, EvidenceTag::protocol_lower_bound, 1, "direct transmission"));
    return r;
}

CapacityReport classical_bit_report(const ReportOptions &o) {
    KrausChannel bit = classical_bit();
    CapacityReport r{"classical-bit", {}};
    r.add(exact_entry(CapacityKind::C_H, EvidenceTag::computed, holevo_chi(bit, Ensemble::basis_states(OrthonormalBasis::computational(2))),
                      "Holevo quantity of the computational basis ensemble"));
    r.add(exact_entry(CapacityKind::I_c, EvidenceTag::computed, coherent_info(bit), "coherent information of a maximally entangled input"));
    add_ea(r, bit, o.seed);
    PptResult ppt = is_ppt(choi_matrix(bit));
    if (ppt.ppt) {
        // A PPT two-qubit Choi state is separable, so the channel is entanglement breaking.
        std::string m = fmt("entanglement breaking: qubit Choi state is PPT (min eigenvalue %.3e)", ppt.min_eigenvalue);
        for (auto k : {CapacityKind::Q, CapacityKind::Q_B, CapacityKind::Q_2}) {
            r.add(exact_entry(k, EvidenceTag::computed, 0, m));
        }
    }
    r.add(exact_entry(CapacityKind::C_2, EvidenceTag::protocol_lower_bound, 1, "one basis state per use"));
    return r;
}

CapacityReport retro22_report(const ReportOptions &o) {
    RetroChannelSpec spec = RetroChannelSpec::standard(2, 2);
    McOptions mc;
    mc.samples = o.samples;
    mc.seed = o.seed;
    mc.workers = o.workers;
    CapacityReport r{"retro-2-2", {}};
    r.add(CapacityKind::C_H, holevo_retro_mc(spec, mc), "Monte Carlo over Haar flags");
    r.add(CapacityKind::I_c, coherent_info_retro_mc(spec, mc), "Monte Carlo over Haar flags");
    ProtocolOptions p = protocol_options(o);
    r.add(protocol_entry(CapacityKind::Q_2, 1, run_fig2(p), "fig2: 1 qubit per use with two-way messages"));
    r.add(protocol_entry(CapacityKind::Q_B, 0.5, compose_qubit_2S_back(p), "qubit-2s-back: 1 qubit per 2 uses with back messages"));
    r.add(protocol_entry(
        CapacityKind::C_B, 2.0 / 3.0, compose_2cbits_3S_back(p), "sd-3s-back: 2 bits per 3 uses with back messages"));
    return r;
}

CapacityReport dephased_retro22_report(const ReportOptions &o) {
    RetroChannelSpec spec = RetroChannelSpec::dephased(2, 2);
    McOptions mc;
    mc.samples = o.samples;
    mc.seed = o.seed;
    mc.workers = o.workers;
    CapacityReport r{"dephased-retro-2-2", {}};
    r.add(CapacityKind::C_H, holevo_retro_mc(spec, mc), "Monte Carlo over Haar flags");
    r.add(protocol_entry(CapacityKind::C_2, 1, run_dephased_c2(protocol_options(o)), "dephased-c2: 1 bit per use with two-way messages"));
    PptResult ppt = is_ppt(choi_matrix(RetroChannelSpec::pauli_discretization(RetroVariant::dephased)));
    if (ppt.ppt) {
        std::string m = fmt(
            "entanglement breaking: measure-and-prepare structure; discretized Choi is PPT (min eigenvalue %.3e)",
            ppt.min_eigenvalue);
        for (auto k : {CapacityKind::Q, CapacityKind::Q_B, CapacityKind::Q_2}) {
            r.add(exact_entry(k, EvidenceTag::computed, 0, m));
        }
    }
    return r;
}

CapacityReport simplified_report(const ReportOptions &o) {
    SimplifiedChannelSpec spec;
    CapacityReport r{"simplified", {}};
    ChiScan scan = simplified_chi_scan(spec, 256, std::min<std::uint64_t>(o.samples, 200000), o.seed, o.workers);
    r.add({CapacityKind::C_H, EvidenceTag::computed, Precision::optimizer, scan.max_value, 0, 0, o.seed,
           "closed-form chi maximized over controls on the x-z great circle"});
    add_ea(r, simplified_with_flag(spec), o.seed, 5);
    ProtocolOptions p = protocol_options(o);
    ErasureResult er = erasure_conversion_mes(spec, p);
    r.add({CapacityKind::Q_2, EvidenceTag::protocol_lower_bound, Precision::exact, 0.5, 0, er.trials, er.seed,
           fmt("erasure-mes: zero-miss flagging, erasure fraction 1/2 (observed %.6f)", er.erasure_fraction)});
    FlaggedOptimum fo = optimize_flagged_rate(spec, 100, o.trials, o.seed, o.workers);
    r.add({CapacityKind::Q_2, EvidenceTag::protocol_lower_bound, Precision::optimizer, fo.rate, 0, fo.simulation.rate.samples, o.seed,
           "flagged-opt: zero-miss flagged erasures, optimized control"});
    r.add(exact_entry(CapacityKind::Q_2, EvidenceTag::paper_reported_unverified, 0.85355, "reported without a protocol"));
    return r;
}

const std::vector<std::string> &report_channels() {
    static const std::vector<std::string> names{"identity-qubit", "classical-bit", "retro-2-2", "dephased-retro-2-2", "simplified"};
    return names;
}

CapacityReport build_report(std::string_view channel, const ReportOptions &o) {
    if (channel == "identity-qubit") {
        return identity_qubit_report(o);
    }
    if (channel == "classical-bit") {
        return classical_bit_report(o);
    }
    if (channel == "retro-2-2") {
        return retro22_report(o);
    }
    if (channel == "dephased-retro-2-2") {
        return dephased_retro22_report(o);
    }
    if (channel == "simplified") {
        return simplified_report(o);
    }
    throw DomainError("unknown report channel '" + std::string(channel) + "'");
}

using nlohmann::json;

json to_json(const CapacityEntry &e) {
    return {
        {"kind", to_string(e.kind)},
        {"tag", to_string(e.tag)},
        {"precision", to_string(e.precision)},
        {"value", e.value},
        {"stderr", e.std_error},
        {"samples", e.samples},
        {"seed", e.seed},
        {"method", e.method},
    };
}

json to_json(const CapacityReport &r) {
    json entries = json::array();
    for (const auto &e : r.entries) {
        entries.push_back(to_json(e));
    }
    return {{"channel", r.channel}, {"entries", entries}};
}

json to_json(const Relation &r) {
    json witnesses = json::array();
    for (const auto &w : r.witnesses) {
        witnesses.push_back({
            {"channel", w.channel},
            {"role", to_string(w.role)},
            {"check", to_string(w.check)},
            {"assumption", w.assumption},
        });
    }
    return {
        {"note", r.note},
        {"first", to_string(r.first)},
        {"second", to_string(r.second)},
        {"status", to_string(r.status)},
        {"factor", r.factor},
        {"witnesses", witnesses},
        {"check", to_string(r.check)},
        {"assumption", r.assumption},
    };
}

json to_json(const std::vector<Relation> &ladder) {
    json out = json::array();
    for (const auto &r : ladder) {
        out.push_back(to_json(r));
    }
    return out;
}

json to_json(const LadderCheck &c) {
    return {
        {"channel", c.channel},
        {"note", c.note},
        {"lower_kind", to_string(c.lower_kind)},
        {"upper_kind", to_string(c.upper_kind)},
        {"lower_method", c.lower_method},
        {"upper_method", c.upper_method},
        {"lower_value", c.lower_value},
        {"upper_value", c.upper_value},
        {"slack", c.slack},
        {"equality", c.equality},
        {"passed", c.passed},
    };
}

json to_json(const Separation &s) {
    json sigmas = std::isfinite(s.sigmas) ? json(s.sigmas) : json(s.sigmas > 0 ? "inf" : "-inf");
    return {
        {"channel", s.channel},
        {"bound_kind", to_string(s.bound_kind)},
        {"method", s.method},
        {"bound", s.bound},
        {"holevo", s.holevo},
        {"holevo_stderr", s.holevo_stderr},
        {"margin", s.margin},
        {"sigmas", sigmas},
        {"established", s.established},
    };
}

namespace {

template <typename T>
T field(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        throw DomainError(std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw DomainError(std::string("bad field '") + key + "': " + e.what());
    }
}

}  // namespace

CapacityEntry capacity_entry_from_json(const json &j) {
    return {
        capacity_kind_from_string(field<std::string>(j, "kind")),
        evidence_tag_from_string(field<std::string>(j, "tag")),
        precision_from_string(field<std::string>(j, "precision")),
        field<double>(j, "value"),
        field<double>(j, "stderr"),
        field<std::uint64_t>(j, "samples"),
        field<std::uint64_t>(j, "seed"),
        field<std::string>(j, "method"),
    };
}

CapacityReport capacity_report_from_json(const json &j) {
    CapacityReport r{field<std::string>(j, "channel"), {}};
    json entries = field<json>(j, "entries");
    if (!entries.is_array()) {
        throw DomainError("'entries' must be an array");
    }
    for (const auto &e : entries) {
        r.add(capacity_entry_from_json(e));
    }
    return r;
}

Relation relation_from_json(const json &j) {
    Relation r{
        field<std::string>(j, "note"),
        capacity_kind_from_string(field<std::string>(j, "first")),
        capacity_kind_from_string(field<std::string>(j, "second")),
        relation_status_from_string(field<std::string>(j, "status")),
        field<double>(j, "factor"),
        {},
        check_status_from_string(field<std::string>(j, "check")),
        field<std::string>(j, "assumption")};
    for (const auto &w : field<json>(j, "witnesses")) {
        r.witnesses.push_back({
            field<std::string>(w, "channel"),
            witness_role_from_string(field<std::string>(w, "role")),
            check_status_from_string(field<std::string>(w, "check")),
            field<std::string>(w, "assumption"),
        });
    }
    return r;
}

std::vector<Relation> ladder_from_json(const json &j) {
    if (!j.is_array()) {
        throw DomainError("ladder must be an array");
    }
    std::vector<Relation> out;
    for (const auto &r : j) {
        out.push_back(relation_from_json(r));
    }
    return out;
}

}  // namespace retrocap
