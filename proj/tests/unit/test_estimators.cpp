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
#include <numbers>

#include "doctest.h"
#include "retrocap/entropy.hpp"
#include "retrocap/errors.hpp"
#include "retrocap/estimators.hpp"
#include "retrocap/haar.hpp"

using namespace retrocap;

namespace {

const double kHolevoR22 = 1 + (std::numbers::pi * std::numbers::pi / 18 - 5.0 / 6) / std::numbers::ln2;

double joint_stderr(const Estimate &a, const Estimate &b) {
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

McOptions options(std::uint64_t samples, std::uint64_t seed, unsigned workers = 4) {
    McOptions o;
    o.samples = samples;
    o.seed = seed;
    o.workers = workers;
    return o;
}

}  // namespace

TEST_CASE("ensembles validate their inputs") {
    CHECK_THROWS_AS(Ensemble({}, {}), DomainError);
    CHECK_THROWS_AS(Ensemble::uniform({}), DomainError);
    CHECK_THROWS_AS(
        Ensemble({0.5, 0.6}, {DensityOperator::maximally_mixed(2), DensityOperator::maximally_mixed(2)}),
        ValidityError);
    CHECK_THROWS_AS(
        Ensemble({0.5, 0.5}, {DensityOperator::maximally_mixed(2), DensityOperator::maximally_mixed(3)}),
        ShapeError);
}

TEST_CASE("holevo quantity of reference channels") {
    Ensemble z = Ensemble::basis_states(OrthonormalBasis::computational(2));
    CHECK(holevo_chi(identity_qudit(2), z) == doctest::Approx(1.0));
    CHECK(holevo_chi(classical_bit(), z) == doctest::Approx(1.0));
    CHECK(holevo_chi(depolarizing(0.5), z) == doctest::Approx(1 - binary_entropy(0.25)).epsilon(1e-12));
    CHECK(holevo_chi(depolarizing(0.5), z) == doctest::Approx(0.188722).epsilon(1e-6));
    CHECK(holevo_chi(depolarizing(1.0), z) == doctest::Approx(0.0));
    CHECK_THROWS_AS(holevo_chi(identity_qudit(3), z), ShapeError);
}

TEST_CASE("holevo quantity is unitarily covariant") {
    RandomStream rng(1);
    for (int t = 0; t < 20; t++) {
        UnitaryOperator v = haar_unitary(2, rng);
        KrausChannel n = depolarizing(rng.uniform());
        std::vector<Matrix> rotated;
        for (const auto &k : n.kraus()) {
            rotated.push_back(k * v.matrix().adjoint());
        }
        KrausChannel nv("rotated", rotated);
        std::vector<DensityOperator> states, moved;
        for (int k = 0; k < 3; k++) {
            StateVector s = haar_state(2, rng);
            states.push_back(DensityOperator::pure(s));
            moved.push_back(DensityOperator(v.matrix() * s.projector() * v.matrix().adjoint()));
        }
        std::vector<double> p{0.2, 0.3, 0.5};
        double a = holevo_chi(n, Ensemble(p, states));
        double b = holevo_chi(nv, Ensemble(p, moved));
        CHECK(std::abs(a - b) < 1e-9);
    }
}

TEST_CASE("finite-flag holevo quantity matches the flag-output channel") {
    RandomStream rng(2);
    for (auto variant : {RetroVariant::standard, RetroVariant::dephased}) {
        RetroChannelSpec spec = RetroChannelSpec::pauli_discretization(variant);
        std::vector<DensityOperator> states;
        StateVector control = haar_state(2, rng);
        for (std::size_t x = 0; x < 2; x++) {
            states.push_back(DensityOperator::pure(tensor(control, StateVector::basis(2, x))));
        }
        Ensemble e = Ensemble::uniform(states);
        double blockwise = holevo_chi(spec, e);
        double direct = holevo_chi(to_kraus(spec), e);
        CHECK(std::abs(blockwise - direct) < 1e-9);
        CHECK(blockwise >= 0);
        CHECK(blockwise <= 1.0 + 1e-12);
    }
    CHECK_THROWS_AS(
        holevo_chi(RetroChannelSpec::standard(2, 2), Ensemble::basis_states(OrthonormalBasis::computational(4))),
        UnsupportedRepresentation);
}

TEST_CASE("fixed-flag average output is maximally mixed") {
    RandomStream rng(3);
    RetroChannelSpec spec = RetroChannelSpec::standard(3, 3);
    for (int t = 0; t < 20; t++) {
        ChannelSample s = sample_flag(spec, rng);
        KrausChannel n = flag_channel(spec, s.flag());
        OrthonormalBasis data = haar_basis(3, rng);
        StateVector control = haar_state(3, rng);
        Matrix avg(3, 3);
        for (std::size_t x = 0; x < 3; x++) {
            avg += (1.0 / 3) * n.apply(kron(control.projector(), data[x].projector()));
        }
        CHECK(distance(avg, DensityOperator::maximally_mixed(3).matrix()) < 1e-12);
    }
}

TEST_CASE("holevo capacity of R22") {
    Estimate e = holevo_retro_mc(RetroChannelSpec::standard(2, 2), options(200000, 42));
    CHECK(e.quantity == "C_H");
    CHECK(e.samples == 200000);
    CHECK(e.seed == 42);
    CHECK(e.batch_means.size() == 20);
    CHECK(std::abs(e.mean - kHolevoR22) < 3 * e.std_error);
    CHECK(kHolevoR22 == doctest::Approx(0.5888002).epsilon(1e-7));

    Estimate id = holevo_retro_mc(RetroChannelSpec::standard(2, 2).with_identity_unitaries(), options(5000, 1));
    CHECK(id.mean == 1.0);
    CHECK(id.std_error == 0.0);

    CHECK_THROWS_AS(holevo_retro_mc(2, 2, 999, 1), DomainError);
}

TEST_CASE("closed-form and eigensolver entropies agree per sample") {
    for (auto flags : {FlagSampling::reduced, FlagSampling::full}) {
        RetroChannelSpec spec = RetroChannelSpec::standard(2, 2);
        RandomStream a(77);
        RandomStream b(77);
        for (int t = 0; t < 2000; t++) {
            double x = holevo_retro_sample(spec, a, EntropyPath::automatic, flags);
            double y = holevo_retro_sample(spec, b, EntropyPath::eigensolver, flags);
            REQUIRE(std::abs(x - y) < 1e-10);
            double u = coherent_retro_sample(spec, a, EntropyPath::automatic, flags);
            double v = coherent_retro_sample(spec, b, EntropyPath::eigensolver, flags);
            REQUIRE(std::abs(u - v) < 1e-10);
        }
    }
}

TEST_CASE("reduced flag sampling matches full flag sampling") {
    for (auto [c, d] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}, {4, 3}}) {
        RetroChannelSpec spec = RetroChannelSpec::standard(c, d);
        McOptions full = options(60000, 5);
        full.flags = FlagSampling::full;
        Estimate a = holevo_retro_mc(spec, options(60000, 6));
        Estimate b = holevo_retro_mc(spec, full);
        CHECK(std::abs(a.mean - b.mean) < 3 * joint_stderr(a, b));
        Estimate ca = coherent_info_retro_mc(spec, options(60000, 7));
        Estimate cb = coherent_info_retro_mc(spec, full);
        CHECK(std::abs(ca.mean - cb.mean) < 3 * joint_stderr(ca, cb));
    }
}

TEST_CASE("estimates do not depend on the worker count") {
    Estimate a = holevo_retro_mc(3, 3, 30000, 9, 1);
    Estimate b = holevo_retro_mc(3, 3, 30000, 9, 5);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.batch_means == b.batch_means);
    Estimate c = coherent_info_retro_mc(2, 2, 30000, 9, 1);
    Estimate d = coherent_info_retro_mc(2, 2, 30000, 9, 3);
    CHECK(c.mean == d.mean);
}

TEST_CASE("dephased variant has the same holevo capacity") {
    Estimate s = holevo_retro_mc(RetroChannelSpec::standard(2, 2), options(100000, 11));
    Estimate d = holevo_retro_mc(RetroChannelSpec::dephased(2, 2), options(100000, 12));
    CHECK(std::abs(s.mean - d.mean) < 3 * joint_stderr(s, d));
    CHECK_THROWS_AS(coherent_info_retro_mc(RetroChannelSpec::dephased(2, 2), options(1000, 1)), DomainError);
}

TEST_CASE("coherent information of R22") {
    Estimate e = coherent_info_retro_mc(RetroChannelSpec::standard(2, 2), options(200000, 42));
    CHECK(e.quantity == "I_c");
    CHECK(std::abs(e.mean - 0.4262) < 3 * e.std_error);

    Estimate id = coherent_info_retro_mc(RetroChannelSpec::standard(2, 2).with_identity_unitaries(), options(2000, 1));
    CHECK(id.mean == 1.0);

    Estimate moment = run_monte_carlo("|tr U1^dag U2|^2/4", 200000, 3, 4, [](RandomStream &r) {
        Matrix u1 = haar_unitary(2, r).matrix();
        Matrix u2 = haar_unitary(2, r).matrix();
        return std::norm((u1.adjoint() * u2).trace()) / 4;
    });
    CHECK(std::abs(moment.mean - 0.25) < 3 * moment.std_error);

    Estimate h = holevo_retro_mc(RetroChannelSpec::standard(2, 2), options(200000, 43));
    CHECK(h.mean - e.mean > 3 * joint_stderr(h, e));
}

TEST_CASE("simplified channel holevo quantity") {
    SimplifiedChannelSpec spec;
    const double eigen_value = 0.5 + 0.5 * (1 - binary_entropy(0.25));
    CHECK(eigen_value == doctest::Approx(0.594361).epsilon(1e-6));
    CHECK(simplified_chi(spec, StateVector::basis(2, 0)) == doctest::Approx(eigen_value).epsilon(1e-14));
    CHECK(simplified_chi(spec, OrthonormalBasis::hadamard()[0]) == doctest::Approx(eigen_value).epsilon(1e-14));
    // |1> is the Z trigger state under the default convention; relabeling the triggers restores the value.
    CHECK(simplified_chi(spec, StateVector::basis(2, 1)) == doctest::Approx(0.5 * (1 - binary_entropy(0.25))).epsilon(1e-12));
    SimplifiedChannelSpec relabeled;
    relabeled.trigger = {0, 0};
    CHECK(simplified_chi(relabeled, StateVector::basis(2, 1)) == doctest::Approx(eigen_value).epsilon(1e-14));
    CHECK(simplified_chi(spec, simplified_control(0)) == doctest::Approx(eigen_value).epsilon(1e-14));

    Estimate mc = simplified_chi_mc(spec, StateVector::basis(2, 0), 100000, 5);
    CHECK(std::abs(mc.mean - eigen_value) < 3 * mc.std_error);
}

TEST_CASE("simplified channel scan") {
    SimplifiedChannelSpec spec;
    CHECK_THROWS_AS(simplified_chi_scan(spec, 63, 1000, 1), DomainError);

    const std::size_t n = 256;
    ChiScan scan = simplified_chi_scan(spec, n, 50000, 3, 2);
    REQUIRE(scan.curve.size() == n);
    CHECK(scan.curve[0].chi == doctest::Approx(0.594361).epsilon(1e-6));
    CHECK(scan.eigenstate_value == doctest::Approx(0.594361).epsilon(1e-6));

    // Exchanging the two bases maps t to pi/2 - t.
    for (std::size_t k = 0; k < n; k++) {
        std::size_t mirror = (n / 4 + n - k) % n;
        CHECK(std::abs(scan.curve[k].chi - scan.curve[mirror].chi) < 1e-12);
    }

    // Two mirror-image maxima on either side of the midway point t = pi/4.
    const double midway = simplified_chi(spec, simplified_control(std::numbers::pi / 4));
    CHECK(scan.argmax_t > 0);
    CHECK(scan.argmax_t < std::numbers::pi / 2);
    CHECK(std::abs(scan.argmax_t - std::numbers::pi / 4) > 0.1);
    CHECK(scan.max_value > midway);
    CHECK(midway > scan.eigenstate_value);
    CHECK(scan.max_value >= scan.grid_max);
    for (double dt : {-1e-4, 1e-4}) {
        CHECK(simplified_chi(spec, simplified_control(scan.argmax_t + dt)) <= scan.max_value);
    }
    CHECK(std::abs(simplified_chi(spec, simplified_control(std::numbers::pi / 2 - scan.argmax_t)) - scan.max_value) < 1e-12);
    CHECK(scan.eigenstate_claim_violated);

    REQUIRE(scan.cross_checks.size() == 3);
    for (const auto &check : scan.cross_checks) {
        CHECK(check.agrees);
    }
}

TEST_CASE("entanglement-assisted mutual information") {
    EaResult id = maximize_ea(identity_qudit(2));
    CHECK(id.value == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(id.converged);
    CHECK(id.start_values.size() == 20);

    EaResult cbit = maximize_ea(classical_bit());
    CHECK(cbit.value == doctest::Approx(1.0).epsilon(1e-3));

    EaResult dead = maximize_ea(depolarizing(1.0));
    CHECK(std::abs(dead.value) < 1e-9);
    CHECK(std::abs(ea_mutual_info(depolarizing(1.0), DensityOperator::pure(StateVector::basis(2, 0)))) < 1e-12);

    CHECK(ea_mutual_info(identity_qudit(2), DensityOperator::maximally_mixed(2)) == doctest::Approx(2.0));

    EaOptions few;
    few.starts = 3;
    EaResult qutrit = maximize_ea(identity_qudit(3), few);
    CHECK(qutrit.value == doctest::Approx(2 * std::log2(3.0)).epsilon(1e-3));

    EaOptions tight;
    tight.max_sweeps = 1;
    EaResult capped = maximize_ea(classical_bit(), tight);
    CHECK_FALSE(capped.converged);

    CHECK_THROWS_AS(maximize_ea(identity_qudit(9)), DomainError);
}

TEST_CASE("trend scan") {
    CHECK(trend_control_dim(2) == 2);
    CHECK(trend_control_dim(4) == 32);
    CHECK(trend_control_dim(8) == 216);
    CHECK(trend_control_dim(16) == 1024);
    CHECK(trend_control_dim(32) == 4000);

    std::vector<std::size_t> dims{2, 4, 8, 16};
    auto rows = trend_scan(dims, 2000, 5, 4);
    REQUIRE(rows.size() == 4);
    Estimate direct = holevo_retro_mc(2, 2, 2000, 5, 1);
    CHECK(rows[0].estimate.mean == direct.mean);
    for (std::size_t k = 0; k < rows.size(); k++) {
        CHECK(rows[k].estimate.mean >= 0);
        CHECK(rows[k].estimate.mean <= std::log2(double(rows[k].d)));
        if (k > 0) {
            CHECK(rows[k - 1].estimate.mean - rows[k].estimate.mean >
                  3 * joint_stderr(rows[k - 1].estimate, rows[k].estimate));
        }
    }
    std::vector<std::size_t> bad{4, 2};
    CHECK_THROWS_AS(trend_scan(bad, 1000, 1), DomainError);
    std::vector<std::size_t> big{64};
    CHECK_THROWS_AS(trend_scan(big, 1000, 1), DomainError);
}

TEST_CASE("capacity reports") {
    CapacityReport r{"R22", {}};
    Estimate e;
    e.mean = 0.5;
    e.std_error = 0.01;
    e.samples = 1000;
    e.seed = 3;
    r.add(CapacityKind::C_H, e, "monte-carlo");
    CHECK(r.find(CapacityKind::C_H, EvidenceTag::computed)->precision == Precision::monte_carlo);
    CHECK_FALSE(r.find(CapacityKind::C_H, EvidenceTag::protocol_lower_bound));
    CHECK_THROWS_AS(r.add(CapacityKind::C_H, e, "again"), DomainError);
    r.add({CapacityKind::Q_2, EvidenceTag::paper_reported_unverified, Precision::exact, 0.85355});
    CHECK(r.entries.size() == 2);
    r.add({CapacityKind::Q_2, EvidenceTag::protocol_lower_bound, Precision::exact, 0.5, 0, 0, 0, "erasure"});
    r.add({CapacityKind::Q_2, EvidenceTag::protocol_lower_bound, Precision::exact, 0.58, 0, 0, 0, "flagged"});
    CHECK_THROWS_AS(
        r.add({CapacityKind::Q_2, EvidenceTag::protocol_lower_bound, Precision::exact, 0.4, 0, 0, 0, "erasure"}), DomainError);
    CHECK(r.find(CapacityKind::Q_2, EvidenceTag::protocol_lower_bound)->value == 0.58);

    for (auto k : {CapacityKind::C, CapacityKind::C_E, CapacityKind::Q_E, CapacityKind::I_c}) {
        CHECK(capacity_kind_from_string(to_string(k)) == k);
    }
    CHECK(evidence_tag_from_string("protocol-lower-bound") == EvidenceTag::protocol_lower_bound);
    CHECK_THROWS_AS(capacity_kind_from_string("Z"), DomainError);
}
