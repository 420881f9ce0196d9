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

#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "retrocap/channels.hpp"
#include "retrocap/choi.hpp"
#include "retrocap/eigen.hpp"
#include "retrocap/errors.hpp"
#include "retrocap/haar.hpp"

using namespace retrocap;

namespace {

DensityOperator random_density(std::size_t n, RandomStream &rng) {
    Matrix a(n, n);
    for (auto &z : a.data()) {
        z = rng.complex_normal();
    }
    Matrix m = a * a.adjoint();
    m *= 1.0 / m.trace().real();
    return DensityOperator(m);
}

Matrix unit_operator(std::size_t d, std::size_t i, std::size_t k) {
    Matrix m(d, d);
    m(i, k) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("sample_flag") {
    RandomStream rng(1);
    RetroChannelSpec single;
    single.bases = std::vector<OrthonormalBasis>{OrthonormalBasis::hadamard()};
    single.unitaries = std::vector<UnitaryTuple>{{UnitaryOperator(pauli(1)), UnitaryOperator(pauli(3))}};
    for (int t = 0; t < 10; t++) {
        ChannelSample s = sample_flag(single, rng);
        CHECK(s.flag().basis_index == 0);
        CHECK(s.flag().unitary_index == 0);
        CHECK(s.flag().unitaries[0].matrix() == pauli(1));
        CHECK_FALSE(s.applied());
    }

    RetroChannelSpec haar3 = RetroChannelSpec::standard(3, 2);
    std::array<double, 3> mean{};
    const int n = 30000;
    for (int t = 0; t < n; t++) {
        ChannelSample s = sample_flag(haar3, rng);
        CHECK(s.flag().unitaries.size() == 3);
        for (std::size_t j = 0; j < 3; j++) {
            mean[j] += std::norm(s.flag().basis[j][0]) / n;
        }
    }
    for (double m : mean) {
        CHECK(std::abs(m - 1.0 / 3) < 0.01);
    }
}

TEST_CASE("apply_retro basic behaviour") {
    RandomStream rng(2);
    RetroChannelSpec id = RetroChannelSpec::standard(2, 2).with_identity_unitaries();
    for (int t = 0; t < 20; t++) {
        StateVector data = haar_state(2, rng);
        JointState in("control", haar_state(2, rng));
        in.attach("data", data);
        RetroOutput out = apply_retro(id, sample_flag(id, rng), in, "control", "data", rng);
        CHECK(out.state.registers().size() == 1);
        CHECK(std::norm(inner(out.state.amplitudes(), data.amplitudes())) == doctest::Approx(1.0));
        CHECK(out.sample.applied());
    }

    RetroChannelSpec spec = RetroChannelSpec::standard(2, 2);
    for (int t = 0; t < 20; t++) {
        ChannelSample s = sample_flag(spec, rng);
        StateVector data = haar_state(2, rng);
        JointState in("control", s.flag().basis[0]);
        in.attach("data", data);
        RetroOutput out = apply_retro(spec, s, in, "control", "data", rng);
        CHECK(AuditView::hidden_outcome(out.sample) == 0u);
        CVector expected = s.flag().unitaries[0].matrix() * std::span<const Complex>(data.amplitudes());
        CHECK(std::norm(inner(out.state.amplitudes(), expected)) == doctest::Approx(1.0));
    }

    std::array<int, 2> counts{};
    const int n = 100000;
    for (int t = 0; t < n; t++) {
        JointState in;
        in.attach_pair("ref", "control", StateVector::maximally_entangled(2), 2, 2);
        in.attach("data", StateVector::basis(2, 0));
        RetroOutput out = apply_retro(spec, sample_flag(spec, rng), in, "control", "data", rng);
        counts[*AuditView::hidden_outcome(out.sample)]++;
    }
    double sigma = std::sqrt(0.25 / n);
    CHECK(std::abs(counts[0] / double(n) - 0.5) < 4 * sigma);

    JointState wrong("control", StateVector::basis(3, 0));
    wrong.attach("data", StateVector::basis(2, 0));
    CHECK_THROWS_AS(apply_retro(spec, sample_flag(spec, rng), wrong, "control", "data", rng), ShapeError);
}

TEST_CASE("apply_retro commutes with ancilla isometries") {
    RandomStream rng(3);
    RetroChannelSpec spec = RetroChannelSpec::standard(2, 3);
    for (int t = 0; t < 50; t++) {
        ChannelSample s = sample_flag(spec, rng);
        JointState in("control", haar_state(2, rng));
        in.attach("data", haar_state(3, rng));
        StateVector anc = haar_state(2, rng);
        UnitaryOperator v = haar_unitary(2, rng);

        RandomStream r1(1000 + t);
        RandomStream r2(1000 + t);
        RetroOutput first = apply_retro(spec, s, in, "control", "data", r1);
        first.state.attach("anc", anc);
        first.state.apply("anc", v.matrix());

        JointState with_anc = in;
        with_anc.attach("anc", anc);
        with_anc.apply("anc", v.matrix());
        RetroOutput second = apply_retro(spec, s, with_anc, "control", "data", r2);

        CHECK(AuditView::hidden_outcome(first.sample) == AuditView::hidden_outcome(second.sample));
        double diff = 0;
        for (std::size_t k = 0; k < first.state.dim(); k++) {
            diff = std::max(diff, std::abs(first.state.amplitudes()[k] - second.state.amplitudes()[k]));
        }
        CHECK(diff < 1e-10);
    }
}

TEST_CASE("fixed-flag map is mixed unitary") {
    RandomStream rng(4);
    RetroChannelSpec spec = RetroChannelSpec::standard(3, 2);
    for (int t = 0; t < 20; t++) {
        ChannelSample s = sample_flag(spec, rng);
        StateVector phi = haar_state(3, rng);
        DensityOperator rho = random_density(2, rng);
        KrausChannel n = flag_channel(spec, s.flag());
        Matrix out = n.apply(kron(phi.projector(), rho.matrix()));
        Matrix oracle(2, 2);
        for (std::size_t j = 0; j < 3; j++) {
            double p = std::norm(inner(s.flag().basis[j].amplitudes(), phi.amplitudes()));
            const Matrix &u = s.flag().unitaries[j].matrix();
            oracle += p * (u * rho.matrix() * u.adjoint());
        }
        CHECK(distance(out, oracle) < 1e-10);
    }
}

TEST_CASE("density form of apply_retro matches the fixed-flag map on average") {
    RandomStream rng(5);
    RetroChannelSpec spec = RetroChannelSpec::standard(2, 2);
    ChannelSample s = sample_flag(spec, rng);
    StateVector phi = haar_state(2, rng);
    DensityOperator in = DensityOperator::pure(tensor(phi, StateVector::basis(2, 0)));
    std::array<std::size_t, 2> dims{2, 2};
    Matrix avg(2, 2);
    for (std::size_t j = 0; j < 2; j++) {
        // Condition on each outcome by running until it appears.
        for (int attempt = 0; attempt < 1000; attempt++) {
            auto out = apply_retro(spec, s, in, dims, 0, 1, rng);
            if (*AuditView::hidden_outcome(out.sample) == j) {
                double p = std::norm(inner(s.flag().basis[j].amplitudes(), phi.amplitudes()));
                avg += p * out.state.matrix();
                break;
            }
        }
    }
    Matrix oracle = flag_channel(spec, s.flag()).apply(in.matrix());
    CHECK(distance(avg, oracle) < 1e-10);
}

TEST_CASE("dephased variant dephases the data") {
    RandomStream rng(6);
    RetroChannelSpec spec = RetroChannelSpec::dephased(2, 2).with_identity_unitaries();
    StateVector plus = OrthonormalBasis::hadamard()[0];
    std::array<std::size_t, 2> dims{2, 2};
    DensityOperator in = DensityOperator::pure(tensor(StateVector::basis(2, 0), plus));
    auto out = apply_retro(spec, sample_flag(spec, rng), in, dims, 0, 1, rng);
    CHECK(distance(out.state.matrix(), DensityOperator::maximally_mixed(2).matrix()) < 1e-12);

    for (int t = 0; t < 20; t++) {
        JointState joint("control", haar_state(2, rng));
        joint.attach("data", plus);
        RetroOutput r = apply_retro(spec, sample_flag(spec, rng), joint, "control", "data", rng);
        double p0 = std::norm(r.state.amplitudes()[0]);
        CHECK((std::abs(p0) < 1e-12 || std::abs(p0 - 1) < 1e-12));
    }

    // Measure-and-prepare structure: every Kraus operator of every fixed flag is rank one.
    RetroChannelSpec disc = RetroChannelSpec::pauli_discretization(RetroVariant::dephased);
    for (std::size_t b = 0; b < disc.basis_count(); b++) {
        for (std::size_t u = 0; u < disc.unitary_tuple_count(); u++) {
            KrausChannel n = flag_channel(disc, finite_flag(disc, b, u));
            for (const auto &k : n.kraus()) {
                auto ev = eigvals_hermitian(k.adjoint() * k);
                CHECK(std::abs(ev[0]) < 1e-12);
                CHECK(std::abs(ev[1]) < 1e-12);
                CHECK(std::abs(ev[2]) < 1e-12);
                CHECK(ev[3] == doctest::Approx(1.0));
            }
        }
    }
}

TEST_CASE("simplified channel") {
    SimplifiedChannelSpec spec;
    RandomStream rng(7);
    StateVector zero = StateVector::basis(2, 0);
    CHECK(no_depolarization_probability(spec, 0, zero) == doctest::Approx(1.0));
    CHECK(no_depolarization_probability(spec, 1, zero) == doctest::Approx(0.5));
    for (int t = 0; t < 200; t++) {
        auto out = apply_simplified(spec, zero, DensityOperator::pure(zero), rng);
        if (out.basis_bit == 0) {
            CHECK_FALSE(out.depolarized);
        }
    }
    int x_depolarized = 0, x_total = 0;
    for (int t = 0; t < 20000; t++) {
        auto out = apply_simplified(spec, zero, DensityOperator::pure(zero), rng);
        if (out.basis_bit == 1) {
            x_total++;
            x_depolarized += out.depolarized;
            if (out.depolarized) {
                CHECK(distance(out.data.matrix(), DensityOperator::maximally_mixed(2).matrix()) < 1e-12);
            }
        }
    }
    CHECK(std::abs(double(x_depolarized) / x_total - 0.5) < 4 * std::sqrt(0.25 / x_total));

    StateVector midway = StateVector::normalized({std::cos(std::numbers::pi / 8), std::sin(std::numbers::pi / 8)});
    double cos2 = std::pow(std::cos(std::numbers::pi / 8), 2);
    CHECK(no_depolarization_probability(spec, 0, midway) == doctest::Approx(cos2).epsilon(1e-12));
    CHECK(no_depolarization_probability(spec, 1, midway) == doctest::Approx(cos2).epsilon(1e-12));
    CHECK(cos2 == doctest::Approx(0.853553).epsilon(1e-6));

    SimplifiedChannelSpec biased;
    biased.bases[1] = OrthonormalBasis::computational(2);
    CHECK_THROWS_AS(biased.validate(), ValidityError);
}

TEST_CASE("reference channels") {
    RandomStream rng(8);
    for (int t = 0; t < 20; t++) {
        DensityOperator rho = random_density(2, rng);
        CHECK(distance(depolarizing(0).apply(rho.matrix()), rho.matrix()) < 1e-12);
        Matrix erased = erasure(1).apply(rho.matrix());
        CHECK(erased.rows() == 3);
        CHECK(std::abs(erased(2, 2) - 1.0) < 1e-12);
    }
    Matrix zero = StateVector::basis(2, 0).projector();
    Matrix half = depolarizing(0.5).apply(zero);
    CHECK(half(0, 0).real() == doctest::Approx(0.75));
    CHECK(half(1, 1).real() == doctest::Approx(0.25));
    CHECK_THROWS_AS(depolarizing(1.5), DomainError);
    CHECK_THROWS_AS(erasure(-0.1), DomainError);

    std::vector<KrausChannel> all{
        identity_qudit(3), classical_bit(), depolarizing(0.3), erasure(0.4), dephasing(), dephasing(0.2)};
    RetroChannelSpec pauli = RetroChannelSpec::pauli_discretization(RetroVariant::standard);
    all.push_back(to_kraus(pauli));
    all.push_back(to_kraus(RetroChannelSpec::pauli_discretization(RetroVariant::dephased)));
    all.push_back(simplified_flag_channel(SimplifiedChannelSpec{}, 0));
    all.push_back(simplified_flag_channel(SimplifiedChannelSpec{}, 1));
    for (const auto &ch : all) {
        Matrix sum(ch.input_dim(), ch.input_dim());
        for (const auto &k : ch.kraus()) {
            sum += k.adjoint() * k;
        }
        CHECK(distance(sum, Matrix::identity(ch.input_dim())) < 1e-8);
        for (int t = 0; t < 1000; t++) {
            DensityOperator rho = random_density(ch.input_dim(), rng);
            CHECK(std::abs(ch.apply(rho.matrix()).trace().real() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("choi matrices") {
    ChoiMatrix id = choi_matrix(identity_qudit(2));
    Matrix phi = StateVector::maximally_entangled(2).projector();
    CHECK(distance(id.dense(), phi) < 1e-12);

    ChoiMatrix deph = choi_matrix(classical_bit());
    std::array<double, 4> diag{0.5, 0, 0, 0.5};
    CHECK(distance(deph.dense(), Matrix::diagonal(diag)) < 1e-12);

    RetroChannelSpec dephased = RetroChannelSpec::pauli_discretization(RetroVariant::dephased);
    ChoiMatrix j = choi_matrix(dephased);
    CHECK(j.flag_count() == 32);
    CHECK(j.trace() == doctest::Approx(1.0));
    KrausChannel direct = to_kraus(dephased);
    const std::size_t nf = 32;
    for (std::size_t i = 0; i < 4; i++) {
        for (std::size_t k = 0; k < 4; k++) {
            Matrix x = unit_operator(4, i, k);
            auto blocks = apply_via_choi(j, x);
            Matrix full = direct.apply(x);
            for (std::size_t f = 0; f < nf; f++) {
                for (std::size_t a = 0; a < 2; a++) {
                    for (std::size_t b = 0; b < 2; b++) {
                        CHECK(std::abs(blocks[f](a, b) - full(a * nf + f, b * nf + f)) < 1e-10);
                    }
                }
            }
        }
    }

    PptResult id_ppt = is_ppt(id);
    CHECK_FALSE(id_ppt.ppt);
    CHECK(id_ppt.min_eigenvalue == doctest::Approx(-0.5));
    CHECK(is_ppt(deph).ppt);
    PptResult dephased_ppt = is_ppt(j);
    CHECK(dephased_ppt.ppt);
    CHECK(dephased_ppt.min_eigenvalue >= -1e-10);

    CHECK_FALSE(is_ppt(choi_matrix(RetroChannelSpec::pauli_discretization(RetroVariant::standard))).ppt);
    CHECK_THROWS_AS(choi_matrix(RetroChannelSpec::dephased(2, 2)), UnsupportedRepresentation);
    CHECK_THROWS_AS(to_kraus(RetroChannelSpec::standard(2, 2)), UnsupportedRepresentation);
}
