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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "retrocap/estimators.hpp"

namespace retrocap {

enum class RelationStatus { saturable_inequality, strict_inequality, incomparable };
enum class CheckStatus { verified_numerically, protocol_witnessed, recorded_only };

/// What a witness channel demonstrates about a relation (first, second).
enum class WitnessRole {
    /// first = second.
    equality,
    /// Equality only because both sides vanish.
    both_zero,
    /// first < second.
    separation,
    /// first > second (incomparabilities only).
    reverse_separation,
};

struct Witness {
    std::string channel;
    WitnessRole role;
    CheckStatus check;
    /// Condition the witness depends on; empty when unconditional.
    std::string assumption;

    bool operator==(const Witness &) const = default;
};

/// One line of the capacity ladder. For inequalities `first` is the smaller side.
struct Relation {
    std::string note;
    CapacityKind first;
    CapacityKind second;
    RelationStatus status;
    /// second = factor * first when nonzero.
    double factor = 0;
    std::vector<Witness> witnesses;
    CheckStatus check;
    std::string assumption;

    bool operator==(const Relation &) const = default;
};

std::string_view to_string(RelationStatus s);
std::string_view to_string(CheckStatus s);
std::string_view to_string(WitnessRole r);
RelationStatus relation_status_from_string(std::string_view s);
CheckStatus check_status_from_string(std::string_view s);
WitnessRole witness_role_from_string(std::string_view s);

/// The full ladder: the classical and quantum chains, the factor-2 law between the
/// entanglement-assisted capacities, the three quantum-below-classical links and the four
/// incomparabilities.
std::vector<Relation> build_ladder();

struct TolerancePolicy {
    /// Slack in joint standard errors when either side is a Monte Carlo estimate.
    double mc_sigmas = 3;
    double exact = 1e-9;
    /// Slack when either side comes from a numerical optimizer.
    double optimizer = 1e-3;
};

/// One inequality instance evaluated on one report: `lower_value <= upper_value + slack`.
struct LadderCheck {
    std::string channel;
    /// Note of the direct relation, or "chain" for a consequence of several.
    std::string note;
    CapacityKind lower_kind;
    CapacityKind upper_kind;
    /// Method strings of the two entries.
    std::string lower_method;
    std::string upper_method;
    double lower_value;
    double upper_value;
    double slack;
    /// Checks |lower_value - upper_value| <= slack instead (lower_value already scaled by the
    /// relation's factor).
    bool equality = false;
    bool passed = true;

    bool operator==(const LadderCheck &) const = default;
};

struct LadderResult {
    std::vector<LadderCheck> checks;
    std::vector<LadderCheck> violations;
};

/// Checks every ladder inequality (and its transitive consequences) for which a report holds a
/// lower bound on the smaller side and a computed value of the larger side. C_H counts as a
/// lower bound on C and I_c as a lower bound on Q. Computed values also bound the protocol lower
/// bounds of their own kind, and computed Q_E and C_E must obey the factor-2 law. Entries tagged
/// paper-reported-unverified are ignored.
LadderResult check_ladder(const std::vector<CapacityReport> &reports, const TolerancePolicy &policy = {});

/// A protocol lower bound exceeding the channel's computed one-shot Holevo quantity.
struct Separation {
    std::string channel;
    CapacityKind bound_kind;
    std::string method;
    double bound;
    double holevo;
    double holevo_stderr;
    double margin;
    /// margin / stderr; infinite with the sign of the margin when the stderr is 0.
    double sigmas;
    /// margin > mc_sigmas * stderr (or > exact when the stderr is 0).
    bool established;
};

/// Every protocol lower bound compared with the report's computed C_H.
std::vector<Separation> headline_separations(const std::vector<CapacityReport> &reports, const TolerancePolicy &policy = {});

struct ReportOptions {
    std::uint64_t samples = 1000000;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

/// Report names accepted by build_report.
const std::vector<std::string> &report_channels();
/// Builds the capacity report of a named channel: "identity-qubit", "classical-bit",
/// "retro-2-2", "dephased-retro-2-2" or "simplified". Throws DomainError on unknown names.
CapacityReport build_report(std::string_view channel, const ReportOptions &options);

CapacityReport identity_qubit_report(const ReportOptions &options);
CapacityReport classical_bit_report(const ReportOptions &options);
CapacityReport retro22_report(const ReportOptions &options);
CapacityReport dephased_retro22_report(const ReportOptions &options);
CapacityReport simplified_report(const ReportOptions &options);

/// S(N(I/d)) - S((N (x) id)(Phi)).
double coherent_info(const KrausChannel &channel);

nlohmann::json to_json(const CapacityEntry &entry);
nlohmann::json to_json(const CapacityReport &report);
nlohmann::json to_json(const Relation &relation);
nlohmann::json to_json(const std::vector<Relation> &ladder);
nlohmann::json to_json(const LadderCheck &check);
nlohmann::json to_json(const Separation &separation);

/// Throw DomainError on malformed input.
CapacityEntry capacity_entry_from_json(const nlohmann::json &j);
CapacityReport capacity_report_from_json(const nlohmann::json &j);
Relation relation_from_json(const nlohmann::json &j);
std::vector<Relation> ladder_from_json(const nlohmann::json &j);

}  // namespace retrocap
