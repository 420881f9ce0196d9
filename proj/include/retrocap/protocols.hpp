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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "retrocap/channels.hpp"
#include "retrocap/errors.hpp"
#include "retrocap/parallel.hpp"

namespace retrocap {

/// Resources consumed or produced by one protocol run. Adds componentwise.
struct ResourceLedger {
    std::uint64_t channel_uses = 0;
    std::uint64_t forward_messages = 0;
    std::uint64_t backward_messages = 0;
    /// Bits of side messages, counted only for messages drawn from finite sets.
    std::uint64_t forward_bits = 0;
    std::uint64_t backward_bits = 0;
    std::uint64_t ebits_consumed = 0;
    std::uint64_t ebits_produced = 0;
    std::uint64_t qubits_transmitted = 0;
    std::uint64_t cbits_transmitted = 0;

    ResourceLedger &operator+=(const ResourceLedger &other);
    bool operator==(const ResourceLedger &) const = default;
};

ResourceLedger operator+(ResourceLedger a, const ResourceLedger &b);

/// Alice -> Bob is forward, Bob -> Alice is backward.
enum class Direction { forward, backward };

/// A classical side message. `sources` names the data it was computed from: "flag" (the
/// channel's public control output) or "echo" (Alice's measurement of a reference entangled with
/// the control input). Anything else fails the independence audit.
struct Message {
    Direction direction;
    std::string label;
    std::string payload;
    std::vector<std::string> sources;
};

enum class EventKind { prepare, channel_use, message, measurement, correction, encode, decode };

struct TraceEvent {
    EventKind kind;
    std::string party;
    std::string detail;
};

struct EchoRecord {
    std::size_t hidden;
    std::size_t echoed;
};

/// Record of one protocol trial.
struct ProtocolTrace {
    std::uint64_t trial = 0;
    std::vector<TraceEvent> events;
    std::vector<Message> messages;
    std::vector<EchoRecord> echoes;
    /// Entanglement fidelity for quantum protocols; 1 for classical ones.
    double fidelity = 1;
    std::uint64_t bit_errors = 0;
    ResourceLedger ledger;
};

std::string_view to_string(Direction d);
std::string_view to_string(EventKind k);

/// A per-trial invariant failed; carries the offending trace.
class ProtocolFailure : public Error {
   public:
    ProtocolFailure(const std::string &what, ProtocolTrace trace) : Error(what), trace_(std::move(trace)) {
    }
    const ProtocolTrace &trace() const {
        return trace_;
    }

   private:
    ProtocolTrace trace_;
};

/// Which basis the echo measurement uses.
enum class EchoBasis {
    /// B*, the analytically forced choice for Phi = sum |ii> / sqrt(d).
    conjugate,
    /// B itself (negative control).
    direct,
};

/// Alice's local correction in the ebit-generation protocol.
enum class CorrectionConvention {
    /// conj(U_j).
    conjugate,
    /// U_j^T (negative control).
    transpose,
};

struct ProtocolOptions {
    std::size_t d = 2;
    /// Control dimension; 0 means c = d.
    std::size_t c = 0;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool identity_unitaries = false;
    EchoBasis echo = EchoBasis::conjugate;
    CorrectionConvention correction = CorrectionConvention::conjugate;
    /// Throw ProtocolFailure on the first failing trial (in trial order).
    bool strict = true;
    /// Number of leading trial traces kept in the result.
    std::size_t keep_traces = 1;
    /// Superdense messages (2-bit values); each is run `trials` times.
    std::vector<unsigned> messages{0, 1, 2, 3};
};

/// Standard R_{c,d} (Haar flags) described by the options.
RetroChannelSpec protocol_channel(const ProtocolOptions &options, RetroVariant variant = RetroVariant::standard);

struct ProtocolResult {
    std::string protocol;
    std::size_t d = 2;
    std::size_t c = 2;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double min_fidelity = 1;
    double mean_fidelity = 1;
    /// Trials with fidelity below 1 - 1e-9.
    std::uint64_t fidelity_failures = 0;
    std::uint64_t bits_sent = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t echo_checks = 0;
    std::uint64_t echo_mismatches = 0;
    /// Every side message was computed from flag/echo data only (and, where a counterfactual
    /// rerun is done, the transcript did not change with the message).
    bool independence_ok = true;
    /// Resources per trial.
    ResourceLedger ledger;
    std::vector<ProtocolTrace> traces;
};

/// Qubit (qudit) transmission with one back message (B) and one forward message (the echo
/// outcome j), verified by entanglement fidelity against a verifier reference.
ProtocolResult run_fig2(const ProtocolOptions &options);
/// Ebit generation with one back message: Alice echo-measures and corrects her data reference.
ProtocolResult run_fig3(const ProtocolOptions &options);
/// Qubit transmission consuming a pre-shared ebit fed into the control; no side messages.
ProtocolResult run_fig4(const ProtocolOptions &options);
/// run_fig3 followed by run_fig4 on the produced ebit: 1 qubit per 2 uses, back messages only.
ProtocolResult compose_qubit_2S_back(const ProtocolOptions &options);
/// Superdense coding of 2 bits: one run_fig3 ebit plus the 2-use qubit channel (3 uses).
/// Uses d = c = 2 regardless of the options.
struct SuperdenseResult : ProtocolResult {
    std::array<std::uint64_t, 4> errors_by_message{};
    std::array<std::uint64_t, 4> trials_by_message{};
};
SuperdenseResult compose_2cbits_3S_back(const ProtocolOptions &options);

/// Ledger of the superdense step alone (1 ebit consumed, 2 cbits delivered).
ResourceLedger superdense_ledger();

struct DephasedC2Result : ProtocolResult {
    /// Errors of Bob's Helstrom guess when the forward message is withheld.
    std::uint64_t withheld_errors = 0;
};
/// One classical bit per use of the dephased R_{2,2} with echo-assisted decoding.
DephasedC2Result run_dephased_c2(const ProtocolOptions &options);

struct ErasureResult : ProtocolResult {
    std::uint64_t flagged = 0;
    /// Depolarized uses that were not flagged.
    std::uint64_t misses = 0;
    /// Flagged uses that were not depolarized.
    std::uint64_t false_flags = 0;
    double erasure_fraction = 0;
    double erasure_stderr = 0;
    /// 1 - erasure fraction.
    double q2_lower_bound = 0;
};
/// Simplified channel with a maximally entangled control: the basis announcement lets Alice
/// learn j and flag every depolarized use as an erasure.
ErasureResult erasure_conversion_mes(const SimplifiedChannelSpec &spec, const ProtocolOptions &options);

/// Control input sqrt(a)|0>|f0> + sqrt(1-a)|1>|f1> (reference first), with
/// f0 = cos(alpha/2)|0> + sin(alpha/2)|1> and f1 orthogonal to it.
struct FlaggedFamily {
    double a;
    double alpha;
};

/// Probability, averaged over the basis announcement, that Alice's zero-miss measurement
/// {projector orthogonal to the depolarized-branch reference state, remainder} is conclusive.
double flagged_rate(const SimplifiedChannelSpec &spec, const FlaggedFamily &family);

/// Simulates the flagged protocol; the estimate is the conclusive-clean frequency.
struct FlaggedSimulation {
    Estimate rate;
    std::uint64_t misses = 0;
};
FlaggedSimulation simulate_flagged(
    const SimplifiedChannelSpec &spec, const FlaggedFamily &family, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

struct FlaggedOptimum {
    FlaggedFamily best;
    double rate = 0;
    std::size_t grid_points = 0;
    FlaggedFamily grid_best;
    double grid_rate = 0;
    FlaggedSimulation simulation;
};
/// Brute-force grid over (a, alpha) with `resolution` values per axis (resolution^2 >= 10^4
/// required, else DomainError), then pattern-search refinement down to step 1e-9. The optimum
/// is cross-checked by simulate_flagged with `trials` trials.
FlaggedOptimum optimize_flagged_rate(
    const SimplifiedChannelSpec &spec, std::size_t resolution, std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

}  // namespace retrocap
