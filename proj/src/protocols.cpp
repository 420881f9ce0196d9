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

#include "retrocap/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "retrocap/eigen.hpp"
#include "retrocap/joint_state.hpp"

namespace retrocap {

ResourceLedger &ResourceLedger::operator+=(const ResourceLedger &o) {
    channel_uses += o.channel_uses;
    forward_messages += o.forward_messages;
    backward_messages += o.backward_messages;
    forward_bits += o.forward_bits;
    backward_bits += o.backward_bits;
    ebits_consumed += o.ebits_consumed;
    ebits_produced += o.ebits_produced;
    qubits_transmitted += o.qubits_transmitted;
    cbits_transmitted += o.cbits_transmitted;
    return *this;
}

ResourceLedger operator+(ResourceLedger a, const ResourceLedger &b) {
    a += b;
    return a;
}

std::string_view to_string(Direction d) {
    return d == Direction::forward ? "forward" : "backward";
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::prepare:
            return "prepare";
        case EventKind::channel_use:
            return "channel_use";
        case EventKind::message:
            return "message";
        case EventKind::measurement:
            return "measurement";
        case EventKind::correction:
            return "correction";
        case EventKind::encode:
            return "encode";
        case EventKind::decode:
            return "decode";
    }
    return "unknown";
}

RetroChannelSpec protocol_channel(const ProtocolOptions &options, RetroVariant variant) {
    std::size_t c = options.c == 0 ? options.d : options.c;
    RetroChannelSpec spec =
        variant == RetroVariant::standard ? RetroChannelSpec::standard(c, options.d) : RetroChannelSpec::dephased(c, options.d);
    if (options.identity_unitaries) {
        spec = spec.with_identity_unitaries();
    }
    return spec;
}

namespace {

constexpr double kFidelityTolerance = 1e-9;

std::uint64_t bits_for(std::size_t n) {
    return n <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(n - 1));
}

std::string format_matrix(const Matrix &m) {
    std::string out;
    char buf[64];
    for (std::size_t r = 0; r < m.rows(); r++) {
        for (std::size_t c = 0; c < m.cols(); c++) {
            std::snprintf(buf, sizeof(buf), "%s%.17g%+.17gi", out.empty() ? "" : ",", m(r, c).real(), m(r, c).imag());
            out += buf;
        }
    }
    return out;
}

std::string describe_basis(const PublicFlag &flag) {
    if (flag.basis_index) {
        return "basis#" + std::to_string(*flag.basis_index);
    }
    return "B=[" + format_matrix(flag.basis.as_matrix()) + "]";
}

std::string describe_flag(const PublicFlag &flag) {
    std::string out = describe_basis(flag);
    if (flag.unitary_index) {
        return out + ";unitaries#" + std::to_string(*flag.unitary_index);
    }
    for (const auto &u : flag.unitaries) {
        out += ";U=[" + format_matrix(u.matrix()) + "]";
    }
    return out;
}

bool sources_allowed(const Message &m) {
    if (m.sources.empty()) {
        return false;
    }
    for (const auto &s : m.sources) {
        if (s != "flag" && s != "echo") {
            return false;
        }
    }
    return true;
}

bool same_transcript(const std::vector<Message> &a, const std::vector<Message> &b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.size(); k++) {
        if (a[k].direction != b[k].direction || a[k].label != b[k].label || a[k].payload != b[k].payload) {
            return false;
        }
    }
    return true;
}

/// One trial in progress.
struct Run {
    const ProtocolOptions &opt;
    RandomStream rng;
    ProtocolTrace trace;

    void event(EventKind kind, std::string party, std::string detail) {
        trace.events.push_back({kind, std::move(party), std::move(detail)});
    }

    void send(Direction dir, std::string label, std::string payload, std::vector<std::string> sources, std::uint64_t bits) {
        event(EventKind::message, dir == Direction::forward ? "Alice" : "Bob", label + ": " + payload);
        trace.messages.push_back({dir, std::move(label), std::move(payload), std::move(sources)});
        if (dir == Direction::forward) {
            trace.ledger.forward_messages++;
            trace.ledger.forward_bits += bits;
        } else {
            trace.ledger.backward_messages++;
            trace.ledger.backward_bits += bits;
        }
    }
};

void prepare_pair(Run &run, JointState &state, const std::string &a, const std::string &b, std::size_t dim, std::string party) {
    state.attach_pair(a, b, StateVector::maximally_entangled(dim), dim, dim);
    run.event(EventKind::prepare, std::move(party), "maximally entangled pair (" + a + ", " + b + "), dim " + std::to_string(dim));
}

ChannelSample use_channel(
    Run &run, const RetroChannelSpec &spec, JointState &state, const std::string &ctrl, const std::string &data) {
    RetroOutput out = apply_retro(spec, sample_flag(spec, run.rng), state, ctrl, data, run.rng);
    state = std::move(out.state);
    run.trace.ledger.channel_uses++;
    run.event(EventKind::channel_use, "channel", "control " + ctrl + ", data " + data);
    return std::move(out.sample);
}

std::uint64_t basis_bits(const RetroChannelSpec &spec) {
    return spec.basis_count() > 0 ? bits_for(spec.basis_count()) : 0;
}

std::uint64_t flag_bits(const RetroChannelSpec &spec) {
    if (!spec.finite()) {
        return 0;
    }
    return bits_for(spec.basis_count()) + bits_for(spec.unitary_tuple_count());
}

/// Measures `ref` in the echo basis of the flag's B and records the audit pair.
std::size_t echo_measure(Run &run, JointState &state, const std::string &ref, const ChannelSample &sample, std::string party) {
    const OrthonormalBasis &b = sample.flag().basis;
    auto m = born_measure(state, ref, run.opt.echo == EchoBasis::conjugate ? b.conjugate() : b, run.rng);
    state = std::move(m.post);
    run.trace.echoes.push_back({*AuditView::hidden_outcome(sample), m.outcome});
    run.event(EventKind::measurement, std::move(party), ref + " in echo basis -> " + std::to_string(m.outcome));
    return m.outcome;
}

/// Qudit transmission: channel use, B sent back, echo outcome sent forward, Bob undoes U_j.
void fig2_stage(
    Run &run, const RetroChannelSpec &spec, JointState &state, const std::string &ctrl_ref, const std::string &ctrl, const std::string &data) {
    ChannelSample s = use_channel(run, spec, state, ctrl, data);
    run.send(Direction::backward, "B", describe_basis(s.flag()), {"flag"}, basis_bits(spec));
    std::size_t j = echo_measure(run, state, ctrl_ref, s, "Alice");
    run.send(Direction::forward, "j", std::to_string(j), {"echo"}, bits_for(spec.c));
    state.apply(data, s.flag().unitaries[j].adjoint().matrix());
    run.event(EventKind::correction, "Bob", "U_" + std::to_string(j) + "^dagger on " + data);
    run.trace.ledger.qubits_transmitted++;
}

/// Ebit generation: channel use, flag sent back, Alice echo-measures and corrects `data_ref`.
void fig3_stage(
    Run &run,
    const RetroChannelSpec &spec,
    JointState &state,
    const std::string &ctrl_ref,
    const std::string &ctrl,
    const std::string &data_ref,
    const std::string &data) {
    ChannelSample s = use_channel(run, spec, state, ctrl, data);
    run.send(Direction::backward, "flag", describe_flag(s.flag()), {"flag"}, flag_bits(spec));
    std::size_t j = echo_measure(run, state, ctrl_ref, s, "Alice");
    const UnitaryOperator &u = s.flag().unitaries[j];
    bool conj = run.opt.correction == CorrectionConvention::conjugate;
    state.apply(data_ref, conj ? u.conj().matrix() : u.transpose().matrix());
    run.event(
        EventKind::correction, "Alice", std::string(conj ? "conj(U_" : "transpose(U_") + std::to_string(j) + ") on " + data_ref);
    run.trace.ledger.ebits_produced++;
}

/// Transmission with a pre-shared ebit (ctrl, bob_ref): Bob reads B from the flag, echo-measures
/// his half and undoes U_j.
void fig4_stage(
    Run &run, const RetroChannelSpec &spec, JointState &state, const std::string &ctrl, const std::string &bob_ref, const std::string &data) {
    ChannelSample s = use_channel(run, spec, state, ctrl, data);
    std::size_t j = echo_measure(run, state, bob_ref, s, "Bob");
    state.apply(data, s.flag().unitaries[j].adjoint().matrix());
    run.event(EventKind::correction, "Bob", "U_" + std::to_string(j) + "^dagger on " + data);
    run.trace.ledger.ebits_consumed++;
    run.trace.ledger.qubits_transmitted++;
}

double pair_fidelity(const JointState &state, const std::string &a, const std::string &b, std::size_t d) {
    return entanglement_fidelity(state.reduced({a, b}), d);
}

/// Per-trial outcome kept for aggregation; traces are kept only when requested or failing.
struct TrialRecord {
    double fidelity = 1;
    bool fidelity_counted = true;
    std::uint64_t bits_sent = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t echo_checks = 0;
    std::uint64_t echo_mismatches = 0;
    bool independent = true;
    std::string failure;
    std::array<std::uint64_t, 4> counters{};
    ResourceLedger ledger;
    std::optional<ProtocolTrace> trace;
};

TrialRecord summarize(ProtocolTrace trace, bool keep) {
    TrialRecord r;
    r.fidelity = trace.fidelity;
    r.bit_errors = trace.bit_errors;
    r.ledger = trace.ledger;
    for (const auto &e : trace.echoes) {
        r.echo_checks++;
        r.echo_mismatches += e.hidden != e.echoed;
    }
    for (const auto &m : trace.messages) {
        r.independent = r.independent && sources_allowed(m);
    }
    if (r.fidelity < 1 - kFidelityTolerance) {
        r.failure = "entanglement fidelity below 1 - 1e-9";
    } else if (r.echo_mismatches > 0) {
        r.failure = "echo audit: measured outcome differs from the hidden outcome";
    } else if (r.bit_errors > 0) {
        r.failure = "decoding error";
    } else if (!r.independent) {
        r.failure = "independence audit: side message uses non-flag data";
    }
    if (keep || !r.failure.empty()) {
        r.trace = std::move(trace);
    }
    return r;
}

template <typename Trial>
std::vector<TrialRecord> run_trials(std::uint64_t n, const ProtocolOptions &opt, Trial trial) {
    if (n == 0) {
        throw DomainError("protocol needs at least one trial");
    }
    std::vector<TrialRecord> records(n);
    RandomStream root(opt.seed);
    parallel_for(n, opt.workers, [&](std::size_t t) {
        records[t] = trial(t, root.derive(t));
        if (records[t].trace) {
            records[t].trace->trial = t;
        }
    });
    return records;
}

void aggregate(
    ProtocolResult &out, std::vector<TrialRecord> &records, const ProtocolOptions &opt, std::string name, std::size_t d, std::size_t c) {
    out.protocol = std::move(name);
    out.d = d;
    out.c = c;
    out.trials = records.size();
    out.seed = opt.seed;
    out.min_fidelity = 1;
    double sum = 0;
    std::uint64_t counted = 0;
    for (auto &r : records) {
        if (r.fidelity_counted) {
            out.min_fidelity = std::min(out.min_fidelity, r.fidelity);
            sum += r.fidelity;
            counted++;
            out.fidelity_failures += r.fidelity < 1 - kFidelityTolerance;
        }
        out.bits_sent += r.bits_sent;
        out.bit_errors += r.bit_errors;
        out.echo_checks += r.echo_checks;
        out.echo_mismatches += r.echo_mismatches;
        out.independence_ok = out.independence_ok && r.independent;
    }
    out.mean_fidelity = counted > 0 ? sum / static_cast<double>(counted) : 1.0;
    out.ledger = records.front().ledger;
    if (opt.strict) {
        for (auto &r : records) {
            if (!r.failure.empty()) {
                throw ProtocolFailure(out.protocol + ": " + r.failure, r.trace ? std::move(*r.trace) : ProtocolTrace{});
            }
        }
    }
    for (std::size_t t = 0; t < records.size() && out.traces.size() < opt.keep_traces; t++) {
        if (records[t].trace) {
            out.traces.push_back(std::move(*records[t].trace));
        }
    }
}

}  // namespace

ProtocolResult run_fig2(const ProtocolOptions &opt) {
    RetroChannelSpec spec = protocol_channel(opt);
    auto records = run_trials(opt.trials, opt, [&](std::size_t t, RandomStream rng) {
        Run run{opt, rng, {}};
        JointState state;
        prepare_pair(run, state, "alice_ctrl_ref", "ctrl", spec.c, "Alice");
        prepare_pair(run, state, "verifier", "data", spec.d, "verifier");
        fig2_stage(run, spec, state, "alice_ctrl_ref", "ctrl", "data");
        run.trace.fidelity = pair_fidelity(state, "verifier", "data", spec.d);
        return summarize(std::move(run.trace), t < opt.keep_traces);
    });
    ProtocolResult out;
    aggregate(out, records, opt, "fig2", spec.d, spec.c);
    return out;
}

ProtocolResult run_fig3(const ProtocolOptions &opt) {
    RetroChannelSpec spec = protocol_channel(opt);
    auto records = run_trials(opt.trials, opt, [&](std::size_t t, RandomStream rng) {
        Run run{opt, rng, {}};
        JointState state;
        prepare_pair(run, state, "alice_ctrl_ref", "ctrl", spec.c, "Alice");
        prepare_pair(run, state, "alice_data_ref", "data", spec.d, "Alice");
        fig3_stage(run, spec, state, "alice_ctrl_ref", "ctrl", "alice_data_ref", "data");
        run.trace.fidelity = pair_fidelity(state, "alice_data_ref", "data", spec.d);
        return summarize(std::move(run.trace), t < opt.keep_traces);
    });
    ProtocolResult out;
    aggregate(out, records, opt, "fig3", spec.d, spec.c);
    return out;
}

ProtocolResult run_fig4(const ProtocolOptions &opt) {
    RetroChannelSpec spec = protocol_channel(opt);
    auto records = run_trials(opt.trials, opt, [&](std::size_t t, RandomStream rng) {
        Run run{opt, rng, {}};
        JointState state;
        prepare_pair(run, state, "ctrl", "bob_ebit", spec.c, "Alice and Bob (pre-shared)");
        prepare_pair(run, state, "verifier", "data", spec.d, "verifier");
        fig4_stage(run, spec, state, "ctrl", "bob_ebit", "data");
        run.trace.fidelity = pair_fidelity(state, "verifier", "data", spec.d);
        return summarize(std::move(run.trace), t < opt.keep_traces);
    });
    ProtocolResult out;
    aggregate(out, records, opt, "fig4", spec.d, spec.c);
    return out;
}

ProtocolResult compose_qubit_2S_back(const ProtocolOptions &opt) {
    RetroChannelSpec spec = protocol_channel(opt);
    if (spec.c != spec.d) {
        throw ShapeError("composition feeds the produced ebit into the control, so it needs c = d");
    }
    auto records = run_trials(opt.trials, opt, [&](std::size_t t, RandomStream rng) {
        Run run{opt, rng, {}};
        JointState state;
        prepare_pair(run, state, "alice_ctrl_ref", "ctrl1", spec.c, "Alice");
        prepare_pair(run, state, "alice_ebit", "bob_ebit", spec.d, "Alice");
        fig3_stage(run, spec, state, "alice_ctrl_ref", "ctrl1", "alice_ebit", "bob_ebit");
        prepare_pair(run, state, "verifier", "data", spec.d, "verifier");
        fig4_stage(run, spec, state, "alice_ebit", "bob_ebit", "data");
        run.trace.fidelity = pair_fidelity(state, "verifier", "data", spec.d);
        return summarize(std::move(run.trace), t < opt.keep_traces);
    });
    ProtocolResult out;
    aggregate(out, records, opt, "qubit-2s-back", spec.d, spec.c);
    return out;
}

ResourceLedger superdense_ledger() {
    ResourceLedger l;
    l.ebits_consumed = 1;
    l.cbits_transmitted = 2;
    return l;
}

namespace {

OrthonormalBasis bell_basis() {
    // (P_k (x) I)|Phi> for P in {I, X, iY, Z}; index k encodes the two bits (k >> 1, k & 1).
    std::vector<StateVector> v;
    const Matrix iy{{0, 1}, {-1, 0}};
    const std::array<Matrix, 4> ops{pauli(0), pauli(1), iy, pauli(3)};
    CVector phi = StateVector::maximally_entangled(2).amplitudes();
    for (const auto &op : ops) {
        v.push_back(StateVector(kron(op, Matrix::identity(2)) * std::span<const Complex>(phi)));
    }
    return OrthonormalBasis(std::move(v));
}

const Matrix &superdense_encoder(unsigned message) {
    static const std::array<Matrix, 4> ops{pauli(0), pauli(1), Matrix{{0, 1}, {-1, 0}}, pauli(3)};
    return ops.at(message);
}

ProtocolTrace superdense_trial(const ProtocolOptions &opt, const RetroChannelSpec &spec, unsigned message, RandomStream rng) {
    Run run{opt, rng, {}};
    JointState state;
    // Shared ebit from the first channel use.
    prepare_pair(run, state, "alice_ctrl_ref1", "ctrl1", 2, "Alice");
    prepare_pair(run, state, "alice_sd", "bob_sd", 2, "Alice");
    fig3_stage(run, spec, state, "alice_ctrl_ref1", "ctrl1", "alice_sd", "bob_sd");
    state.apply("alice_sd", superdense_encoder(message));
    run.event(EventKind::encode, "Alice", "message " + std::to_string(message) + " on alice_sd");
    // Two further uses carry alice_sd to Bob.
    prepare_pair(run, state, "alice_ctrl_ref2", "ctrl2", 2, "Alice");
    prepare_pair(run, state, "alice_ebit", "bob_ebit", 2, "Alice");
    fig3_stage(run, spec, state, "alice_ctrl_ref2", "ctrl2", "alice_ebit", "bob_ebit");
    fig4_stage(run, spec, state, "alice_ebit", "bob_ebit", "alice_sd");
    state.merge("alice_sd", "bob_sd", "bell");
    auto m = born_measure(state, "bell", bell_basis(), run.rng);
    run.event(EventKind::decode, "Bob", "Bell outcome " + std::to_string(m.outcome));
    run.trace.bit_errors = static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(m.outcome) ^ message));
    run.trace.ledger += superdense_ledger();
    return std::move(run.trace);
}

}  // namespace

SuperdenseResult compose_2cbits_3S_back(const ProtocolOptions &opt) {
    ProtocolOptions o = opt;
    o.d = 2;
    o.c = 2;
    RetroChannelSpec spec = protocol_channel(o);
    if (o.messages.empty()) {
        throw DomainError("superdense composition needs at least one message");
    }
    for (unsigned m : o.messages) {
        if (m > 3) {
            throw DomainError("superdense messages are 2-bit values");
        }
    }
    const std::uint64_t nm = o.messages.size();
    auto records = run_trials(o.trials * nm, o, [&](std::size_t t, RandomStream rng) {
        unsigned message = o.messages[t % nm];
        ProtocolTrace trace = superdense_trial(o, spec, message, rng);
        ProtocolTrace other = superdense_trial(o, spec, (message + 1) % 4, rng);
        bool same = same_transcript(trace.messages, other.messages);
        TrialRecord r = summarize(std::move(trace), t < o.keep_traces || !same);
        r.bits_sent = 2;
        r.counters[0] = message;
        if (!same) {
            r.independent = false;
            if (r.failure.empty()) {
                r.failure = "independence audit: side messages changed with the message";
            }
        }
        return r;
    });
    SuperdenseResult out;
    for (const auto &r : records) {
        out.trials_by_message[r.counters[0]]++;
        out.errors_by_message[r.counters[0]] += r.bit_errors;
    }
    aggregate(out, records, o, "sd-3s-back", 2, 2);
    return out;
}

namespace {

struct C2Trial {
    ProtocolTrace trace;
    bool withheld_error = false;
};

C2Trial dephased_c2_trial(const ProtocolOptions &opt, const RetroChannelSpec &spec, std::size_t x, RandomStream rng) {
    Run run{opt, rng, {}};
    JointState state;
    prepare_pair(run, state, "alice_ctrl_ref", "ctrl", 2, "Alice");
    state.attach("data", StateVector::basis(2, x));
    run.event(EventKind::encode, "Alice", "bit " + std::to_string(x) + " as |" + std::to_string(x) + ">");
    ChannelSample s = use_channel(run, spec, state, "ctrl", "data");
    run.send(Direction::backward, "B", describe_basis(s.flag()), {"flag"}, basis_bits(spec));

    // Counterfactual Bob without the forward message: Helstrom measurement between the two
    // j-averaged codeword states.
    const auto &us = s.flag().unitaries;
    Matrix delta(2, 2);
    for (std::size_t j = 0; j < 2; j++) {
        CVector u0 = us[j].matrix().column(0);
        CVector u1 = us[j].matrix().column(1);
        delta += 0.5 * (Matrix::outer(u0, u0) - Matrix::outer(u1, u1));
    }
    EigenDecomposition e = eig_hermitian(delta);
    RandomStream guess_rng = run.rng.derive(1);
    auto guess = born_measure(state, "data", OrthonormalBasis::from_columns(e.vectors), guess_rng);
    // Column 1 has the larger eigenvalue, which favours bit 0.
    std::size_t guessed = guess.outcome == 1 ? 0 : 1;

    std::size_t j = echo_measure(run, state, "alice_ctrl_ref", s, "Alice");
    run.send(Direction::forward, "j", std::to_string(j), {"echo"}, 1);
    auto decode = born_measure(state, "data", OrthonormalBasis::from_columns(us[j].matrix()), run.rng);
    run.event(EventKind::decode, "Bob", "measured in U_j basis -> " + std::to_string(decode.outcome));
    run.trace.bit_errors = decode.outcome != x;
    run.trace.ledger.cbits_transmitted = 1;
    return {std::move(run.trace), guessed != x};
}

}  // namespace

DephasedC2Result run_dephased_c2(const ProtocolOptions &opt) {
    ProtocolOptions o = opt;
    o.d = 2;
    o.c = 2;
    RetroChannelSpec spec = protocol_channel(o, RetroVariant::dephased);
    auto records = run_trials(o.trials, o, [&](std::size_t t, RandomStream rng) {
        std::size_t x = rng.derive(0).coin() ? 1 : 0;
        RandomStream channel_rng = rng.derive(1);
        C2Trial trial = dephased_c2_trial(o, spec, x, channel_rng);
        C2Trial other = dephased_c2_trial(o, spec, 1 - x, channel_rng);
        bool same = same_transcript(trial.trace.messages, other.trace.messages);
        TrialRecord r = summarize(std::move(trial.trace), t < o.keep_traces || !same);
        r.bits_sent = 1;
        r.counters[0] = trial.withheld_error;
        if (!same) {
            r.independent = false;
            if (r.failure.empty()) {
                r.failure = "independence audit: side messages changed with the message";
            }
        }
        return r;
    });
    DephasedC2Result out;
    for (const auto &r : records) {
        out.withheld_errors += r.counters[0];
    }
    aggregate(out, records, o, "dephased-c2", 2, 2);
    return out;
}

ErasureResult erasure_conversion_mes(const SimplifiedChannelSpec &spec, const ProtocolOptions &opt) {
    spec.validate();
    auto records = run_trials(opt.trials, opt, [&](std::size_t t, RandomStream rng) {
        Run run{opt, rng, {}};
        JointState state;
        prepare_pair(run, state, "alice_ctrl_ref", "ctrl", 2, "Alice");
        prepare_pair(run, state, "verifier", "data", 2, "verifier");
        auto out = apply_simplified(spec, state, "ctrl", "data", run.rng);
        state = std::move(out.state);
        run.trace.ledger.channel_uses++;
        run.event(EventKind::channel_use, "channel", "simplified, control ctrl, data data");
        const std::size_t b = out.basis_bit;
        run.send(Direction::backward, "b", std::to_string(b), {"flag"}, 1);
        const OrthonormalBasis &basis = spec.bases[b];
        auto m = born_measure(state, "alice_ctrl_ref", run.opt.echo == EchoBasis::conjugate ? basis.conjugate() : basis, run.rng);
        state = std::move(m.post);
        run.trace.echoes.push_back({out.hidden_outcome, m.outcome});
        run.event(EventKind::measurement, "Alice", "alice_ctrl_ref in echo basis -> " + std::to_string(m.outcome));
        bool flagged = m.outcome == spec.trigger[b];
        run.send(Direction::forward, "erased", flagged ? "1" : "0", {"echo"}, 1);
        bool unflagged_fidelity_counted = !flagged;
        if (!flagged) {
            run.trace.fidelity = pair_fidelity(state, "verifier", "data", 2);
        }
        bool miss = out.depolarized && !flagged;
        TrialRecord r = summarize(std::move(run.trace), t < opt.keep_traces || miss);
        r.fidelity_counted = unflagged_fidelity_counted;
        r.counters[0] = flagged;
        r.counters[1] = miss;
        r.counters[2] = flagged && !out.depolarized;
        if (miss && r.failure.empty()) {
            r.failure = "missed depolarization";
        }
        return r;
    });
    ErasureResult out;
    std::vector<double> flags;
    for (const auto &r : records) {
        out.flagged += r.counters[0];
        out.misses += r.counters[1];
        out.false_flags += r.counters[2];
        flags.push_back(static_cast<double>(r.counters[0]));
    }
    aggregate(out, records, opt, "erasure-mes", 2, 2);
    Estimate e = estimate_from_samples("erasure_fraction", flags, opt.seed);
    out.erasure_fraction = e.mean;
    out.erasure_stderr = e.std_error;
    out.q2_lower_bound = 1 - e.mean;
    return out;
}

namespace {

std::array<CVector, 2> schmidt_control_basis(double alpha) {
    return {CVector{std::cos(alpha / 2), std::sin(alpha / 2)}, CVector{-std::sin(alpha / 2), std::cos(alpha / 2)}};
}

/// Unnormalized reference state left by control outcome `c_j`.
CVector reference_branch(const FlaggedFamily &fam, const StateVector &cj) {
    auto f = schmidt_control_basis(fam.alpha);
    return {std::sqrt(fam.a) * inner(cj.amplitudes(), f[0]), std::sqrt(1 - fam.a) * inner(cj.amplitudes(), f[1])};
}

/// Alice's zero-miss measurement basis for basis bit b: {clean, suspect}. Empty when the trigger
/// branch has zero weight (every outcome is then clean).
std::optional<OrthonormalBasis> flagged_measurement(const SimplifiedChannelSpec &spec, const FlaggedFamily &fam, std::size_t b) {
    CVector rt = reference_branch(fam, spec.bases[b][spec.trigger[b]]);
    double w = norm(rt);
    if (w < 1e-12) {
        return std::nullopt;
    }
    StateVector t(CVector{rt[0] / w, rt[1] / w}, 1e-9);
    StateVector perp(CVector{-std::conj(t[1]), std::conj(t[0])}, 1e-9);
    return OrthonormalBasis({perp, t}, 1e-9);
}

void check_family(const FlaggedFamily &fam) {
    if (!(fam.a >= 0 && fam.a <= 1)) {
        throw DomainError("Schmidt weight must lie in [0, 1]");
    }
}

}  // namespace

double flagged_rate(const SimplifiedChannelSpec &spec, const FlaggedFamily &fam) {
    spec.validate();
    check_family(fam);
    double rate = 0;
    for (std::size_t b = 0; b < 2; b++) {
        CVector rn = reference_branch(fam, spec.bases[b][1 - spec.trigger[b]]);
        double pn = std::norm(rn[0]) + std::norm(rn[1]);
        auto meas = flagged_measurement(spec, fam, b);
        if (!meas) {
            rate += pn / 2;
            continue;
        }
        rate += std::norm(inner((*meas)[0].amplitudes(), rn)) / 2;
    }
    return rate;
}

FlaggedSimulation simulate_flagged(
    const SimplifiedChannelSpec &spec, const FlaggedFamily &fam, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    spec.validate();
    check_family(fam);
    if (trials == 0) {
        throw DomainError("simulation needs at least one trial");
    }
    auto f = schmidt_control_basis(fam.alpha);
    CVector psi(4);
    for (std::size_t k = 0; k < 2; k++) {
        double w = std::sqrt(k == 0 ? fam.a : 1 - fam.a);
        for (std::size_t i = 0; i < 2; i++) {
            psi[k * 2 + i] = w * f[k][i];
        }
    }
    const std::array<std::optional<OrthonormalBasis>, 2> meas{
        flagged_measurement(spec, fam, 0), flagged_measurement(spec, fam, 1)};
    std::vector<double> clean(trials);
    std::vector<std::uint8_t> missed(trials);
    RandomStream root(seed);
    parallel_for(trials, workers, [&](std::size_t t) {
        RandomStream rng = root.derive(t);
        JointState state;
        state.attach_pair("ref", "ctrl", StateVector(psi, 1e-9), 2, 2);
        state.attach("data", StateVector::basis(2, 0));
        auto out = apply_simplified(spec, state, "ctrl", "data", rng);
        bool is_clean = true;
        if (meas[out.basis_bit]) {
            is_clean = born_measure(out.state, "ref", *meas[out.basis_bit], rng).outcome == 0;
        }
        clean[t] = is_clean ? 1.0 : 0.0;
        missed[t] = is_clean && out.depolarized;
    });
    FlaggedSimulation sim{estimate_from_samples("conclusive_clean_rate", clean, seed), 0};
    for (auto m : missed) {
        sim.misses += m;
    }
    return sim;
}

FlaggedOptimum optimize_flagged_rate(
    const SimplifiedChannelSpec &spec, std::size_t resolution, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
    if (resolution < 2 || resolution * resolution < 10000) {
        throw DomainError("flagged-rate grid needs at least 10^4 points");
    }
    spec.validate();
    const double two_pi = 2 * std::numbers::pi;
    FlaggedOptimum best;
    best.grid_rate = -1;
    for (std::size_t i = 0; i < resolution; i++) {
        double a = static_cast<double>(i) / static_cast<double>(resolution - 1);
        for (std::size_t k = 0; k < resolution; k++) {
            double alpha = two_pi * static_cast<double>(k) / static_cast<double>(resolution);
            double r = flagged_rate(spec, {a, alpha});
            best.grid_points++;
            if (r > best.grid_rate) {
                best.grid_rate = r;
                best.grid_best = {a, alpha};
            }
        }
    }
    FlaggedFamily x = best.grid_best;
    double fx = best.grid_rate;
    double step_a = 1.0 / static_cast<double>(resolution - 1);
    double step_alpha = two_pi / static_cast<double>(resolution);
    while (step_a > 1e-9 || step_alpha > 1e-9) {
        bool improved = false;
        for (int coord = 0; coord < 2 && !improved; coord++) {
            for (double sign : {1.0, -1.0}) {
                FlaggedFamily y = x;
                if (coord == 0) {
                    y.a = std::clamp(y.a + sign * step_a, 0.0, 1.0);
                } else {
                    y.alpha = std::fmod(y.alpha + sign * step_alpha + two_pi, two_pi);
                }
                double fy = flagged_rate(spec, y);
                if (fy > fx) {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            step_a /= 2;
            step_alpha /= 2;
        }
    }
    best.best = x;
    best.rate = fx;
    best.simulation = simulate_flagged(spec, x, trials, seed, workers);
    return best;
}

}  // namespace retrocap
