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

#include <cmath>
#include <set>

#include "doctest.h"
#include "retrocap/errors.hpp"
#include "retrocap/ladder.hpp"

using namespace retrocap;

namespace {

const Relation &relation(const std::vector<Relation> &ladder, CapacityKind a, CapacityKind b) {
    for (const auto &r : ladder) {
        if (r.first == a && r.second == b) {
            return r;
        }
    }
    throw Error("relation not found");
}

ReportOptions small_options() {
    ReportOptions o;
    o.samples = 20000;
    o.trials = 200;
    o.seed = 5;
    o.workers = 4;
    return o;
}

double value(const CapacityReport &r, CapacityKind k, EvidenceTag t = EvidenceTag::computed) {
    auto e = r.find(k, t);
    REQUIRE(e.has_value());
    return e->value;
}

}  // namespace

TEST_CASE("ladder structure") {
    auto ladder = build_ladder();
    CHECK(ladder.size() == 14);
    std::set<std::string> notes;
    for (const auto &r : ladder) {
        CAPTURE(r.note);
        notes.insert(r.note);
        CHECK(!r.witnesses.empty());
        if (r.status == RelationStatus::strict_inequality) {
            for (const auto &w : r.witnesses) {
                CHECK(w.role != WitnessRole::equality);
            }
        }
        if (r.status == RelationStatus::incomparable) {
            bool forward = false;
            bool reverse = false;
            for (const auto &w : r.witnesses) {
                forward = forward || w.role == WitnessRole::separation;
                reverse = reverse || w.role == WitnessRole::reverse_separation;
            }
            CHECK(forward);
            CHECK(reverse);
        }
        for (const auto &w : r.witnesses) {
            if (!w.assumption.empty() && w.role != WitnessRole::both_zero && w.check == CheckStatus::recorded_only) {
                CHECK(r.check == CheckStatus::recorded_only);
            }
        }
    }
    CHECK(notes.size() == 12);

    const Relation &g = relation(ladder, CapacityKind::Q_E, CapacityKind::C_E);
    CHECK(g.status == RelationStatus::strict_inequality);
    CHECK(g.factor == 2);

    const Relation &b = relation(ladder, CapacityKind::C_B, CapacityKind::C_2);
    bool dephased = false;
    for (const auto &w : b.witnesses) {
        dephased = dephased || (w.role == WitnessRole::separation && w.channel == "dephased-retro-2-2");
    }
    CHECK(dephased);

    const Relation &k = relation(ladder, CapacityKind::C_B, CapacityKind::Q_2);
    CHECK(k.status == RelationStatus::incomparable);
    bool classical = false;
    for (const auto &w : k.witnesses) {
        classical = classical || (w.role == WitnessRole::reverse_separation && w.channel == "classical-bit");
    }
    CHECK(classical);
    CHECK(relation(ladder, CapacityKind::Q_B, CapacityKind::Q_2).check == CheckStatus::recorded_only);
}

TEST_CASE("ladder and reports round-trip through json") {
    auto ladder = build_ladder();
    CHECK(ladder_from_json(nlohmann::json::parse(to_json(ladder).dump())) == ladder);

    CapacityReport r{"x", {}};
    r.add({CapacityKind::C_H, EvidenceTag::computed, Precision::monte_carlo, 0.1 + 0.2, 1e-4 / 3, 1000, 42, "mc"});
    r.add({CapacityKind::Q_2, EvidenceTag::paper_reported_unverified, Precision::exact, 0.85355, 0, 0, 0, "p"});
    CHECK(capacity_report_from_json(nlohmann::json::parse(to_json(r).dump())) == r);

    CHECK_THROWS_AS(capacity_report_from_json(nlohmann::json::object()), DomainError);
    CHECK_THROWS_AS(relation_status_from_string("maybe"), DomainError);
}

TEST_CASE("reference channel reports") {
    ReportOptions o = small_options();
    CapacityReport id = identity_qubit_report(o);
    CHECK(value(id, CapacityKind::C_E) == doctest::Approx(2).epsilon(1e-3));
    CHECK(value(id, CapacityKind::Q_E) == doctest::Approx(value(id, CapacityKind::C_E) / 2));
    CHECK(value(id, CapacityKind::C_H) == doctest::Approx(1).epsilon(1e-12));
    CHECK(value(id, CapacityKind::I_c) == doctest::Approx(1).epsilon(1e-12));

    CapacityReport bit = classical_bit_report(o);
    CHECK(value(bit, CapacityKind::C_H) == doctest::Approx(1).epsilon(1e-12));
    CHECK(std::abs(value(bit, CapacityKind::C_E) - 1) < 1e-3);
    CHECK(std::abs(value(bit, CapacityKind::I_c)) < 1e-12);
    for (auto k : {CapacityKind::Q, CapacityKind::Q_B, CapacityKind::Q_2}) {
        CHECK(value(bit, k) == 0);
    }

    LadderResult res = check_ladder({id, bit});
    CHECK(res.violations.empty());
    CHECK(res.checks.size() > 5);
    bool factor_checked = false;
    for (const auto &c : res.checks) {
        factor_checked = factor_checked || (c.note == "g" && c.equality && c.channel == "identity-qubit");
    }
    CHECK(factor_checked);

    CHECK_THROWS_AS(build_report("nope", o), DomainError);
}

TEST_CASE("check_ladder finds violations and is monotone") {
    CapacityReport bad{"bad", {}};
    bad.add({CapacityKind::C_E, EvidenceTag::computed, Precision::exact, 1, 0, 0, 0, "v"});
    bad.add({CapacityKind::C_2, EvidenceTag::protocol_lower_bound, Precision::exact, 1.5, 0, 0, 0, "lb"});
    bad.add({CapacityKind::Q_E, EvidenceTag::computed, Precision::exact, 0.2, 0, 0, 0, "v"});
    bad.add({CapacityKind::Q_2, EvidenceTag::paper_reported_unverified, Precision::exact, 9, 0, 0, 0, "ignored"});
    LadderResult r = check_ladder({bad});
    REQUIRE(r.violations.size() == 2);
    CHECK(r.violations[0].note == "a");
    CHECK(r.violations[1].note == "g");

    CapacityReport mc{"mc", {}};
    mc.add({CapacityKind::C_H, EvidenceTag::computed, Precision::monte_carlo, 1.02, 0.01, 100, 1, "mc"});
    mc.add({CapacityKind::C_E, EvidenceTag::computed, Precision::exact, 1, 0, 0, 0, "v"});
    LadderResult m = check_ladder({mc});
    REQUIRE(m.checks.size() == 1);
    CHECK(m.checks[0].note == "chain");
    CHECK(m.checks[0].slack == doctest::Approx(0.03));
    CHECK(m.violations.empty());

    LadderResult both = check_ladder({bad, mc});
    REQUIRE(both.checks.size() == r.checks.size() + m.checks.size());
    for (std::size_t i = 0; i < r.checks.size(); i++) {
        CHECK(both.checks[i] == r.checks[i]);
    }
}

TEST_CASE("retro channel reports and the headline separation") {
    ReportOptions o = small_options();
    CapacityReport r22 = retro22_report(o);
    CHECK(value(r22, CapacityKind::Q_2, EvidenceTag::protocol_lower_bound) == 1);
    CHECK(value(r22, CapacityKind::Q_B, EvidenceTag::protocol_lower_bound) == 0.5);
    CHECK(value(r22, CapacityKind::C_B, EvidenceTag::protocol_lower_bound) == doctest::Approx(2.0 / 3.0));
    auto seps = headline_separations({r22});
    bool q2 = false;
    for (const auto &s : seps) {
        if (s.bound_kind == CapacityKind::Q_2) {
            q2 = true;
            CHECK(s.established);
            CHECK(s.sigmas > 3);
            CHECK(s.margin == doctest::Approx(1 - value(r22, CapacityKind::C_H)));
        }
    }
    CHECK(q2);

    CapacityReport deph = dephased_retro22_report(o);
    CHECK(value(deph, CapacityKind::C_2, EvidenceTag::protocol_lower_bound) == 1);
    CHECK(value(deph, CapacityKind::Q_2) == 0);
    CHECK(std::abs(value(deph, CapacityKind::C_H) - value(r22, CapacityKind::C_H)) < 0.02);

    CHECK(check_ladder({r22, deph}).violations.empty());
}

TEST_CASE("simplified channel report") {
    ReportOptions o = small_options();
    CapacityReport s = simplified_report(o);
    CHECK(value(s, CapacityKind::Q_2, EvidenceTag::protocol_lower_bound) == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-6));
    CHECK(value(s, CapacityKind::Q_2, EvidenceTag::paper_reported_unverified) == 0.85355);
    CHECK(value(s, CapacityKind::C_H) > 0.594361);
    CHECK(check_ladder({s}).violations.empty());
}
