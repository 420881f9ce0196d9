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

#include "retrocap/channels.hpp"

#include <cmath>
#include <string>

#include "retrocap/errors.hpp"
#include "retrocap/haar.hpp"

namespace retrocap {

/// Internal write access to ChannelSample's hidden outcome.
struct RetroAccess {
    static void set_hidden(ChannelSample &s, std::size_t j) {
        s.hidden_ = j;
    }
};

RetroChannelSpec RetroChannelSpec::standard(std::size_t c, std::size_t d) {
    RetroChannelSpec s;
    s.c = c;
    s.d = d;
    s.validate();
    return s;
}

RetroChannelSpec RetroChannelSpec::dephased(std::size_t c, std::size_t d) {
    RetroChannelSpec s = standard(c, d);
    s.variant = RetroVariant::dephased;
    return s;
}

RetroChannelSpec RetroChannelSpec::pauli_discretization(RetroVariant variant) {
    RetroChannelSpec s;
    s.variant = variant;
    s.bases = std::vector<OrthonormalBasis>{OrthonormalBasis::computational(2), OrthonormalBasis::hadamard()};
    std::vector<UnitaryTuple> tuples;
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            tuples.push_back({UnitaryOperator(pauli(a)), UnitaryOperator(pauli(b))});
        }
    }
    s.unitaries = std::move(tuples);
    s.validate();
    return s;
}

RetroChannelSpec RetroChannelSpec::with_identity_unitaries() const {
    RetroChannelSpec s = *this;
    s.unitaries = std::vector<UnitaryTuple>{UnitaryTuple(c, UnitaryOperator::identity(d))};
    return s;
}

bool RetroChannelSpec::finite() const {
    return std::holds_alternative<std::vector<OrthonormalBasis>>(bases) &&
           std::holds_alternative<std::vector<UnitaryTuple>>(unitaries);
}

std::size_t RetroChannelSpec::basis_count() const {
    if (auto *v = std::get_if<std::vector<OrthonormalBasis>>(&bases)) {
        return v->size();
    }
    return 0;
}

std::size_t RetroChannelSpec::unitary_tuple_count() const {
    if (auto *v = std::get_if<std::vector<UnitaryTuple>>(&unitaries)) {
        return v->size();
    }
    return 0;
}

std::size_t RetroChannelSpec::flag_count() const {
    if (!finite()) {
        throw UnsupportedRepresentation("flag_count requires finite ensembles");
    }
    return basis_count() * unitary_tuple_count();
}

void RetroChannelSpec::validate() const {
    if (c < 2 || d < 2) {
        throw DomainError("retro channel needs c >= 2 and d >= 2");
    }
    if (c > kMaxTensorDim || d > 64) {
        throw DomainError("retro channel dimensions too large");
    }
    if (auto *v = std::get_if<std::vector<OrthonormalBasis>>(&bases)) {
        if (v->empty()) {
            throw DomainError("finite basis ensemble is empty");
        }
        for (const auto &b : *v) {
            if (b.dim() != c) {
                throw ValidityError("basis ensemble member has wrong dimension");
            }
        }
    }
    if (auto *v = std::get_if<std::vector<UnitaryTuple>>(&unitaries)) {
        if (v->empty()) {
            throw DomainError("finite unitary ensemble is empty");
        }
        for (const auto &t : *v) {
            if (t.size() != c) {
                throw ValidityError("unitary tuple must hold exactly c unitaries");
            }
            for (const auto &u : t) {
                if (u.dim() != d) {
                    throw ValidityError("unitary ensemble member has wrong dimension");
                }
            }
        }
    }
}

PublicFlag finite_flag(const RetroChannelSpec &spec, std::size_t basis_index, std::size_t unitary_index) {
    const auto &bases = std::get<std::vector<OrthonormalBasis>>(spec.bases);
    const auto &tuples = std::get<std::vector<UnitaryTuple>>(spec.unitaries);
    return PublicFlag{bases.at(basis_index), tuples.at(unitary_index), basis_index, unitary_index};
}

ChannelSample sample_flag(const RetroChannelSpec &spec, RandomStream &rng) {
    std::optional<std::size_t> bi, ui;
    std::optional<OrthonormalBasis> basis;
    if (auto *v = std::get_if<std::vector<OrthonormalBasis>>(&spec.bases)) {
        bi = rng.uniform_int(v->size());
        basis = (*v)[*bi];
    } else {
        basis = haar_basis(spec.c, rng);
    }
    std::vector<UnitaryOperator> us;
    if (auto *v = std::get_if<std::vector<UnitaryTuple>>(&spec.unitaries)) {
        ui = rng.uniform_int(v->size());
        us = (*v)[*ui];
    } else {
        us.reserve(spec.c);
        for (std::size_t k = 0; k < spec.c; k++) {
            us.push_back(haar_unitary(spec.d, rng));
        }
    }
    return ChannelSample(PublicFlag{std::move(*basis), std::move(us), bi, ui});
}

namespace {

void check_dims(const RetroChannelSpec &spec, const PublicFlag &flag) {
    if (flag.basis.dim() != spec.c || flag.unitaries.size() != spec.c) {
        throw ShapeError("flag does not match channel dimensions");
    }
}

}  // namespace

RetroOutput apply_retro(
    const RetroChannelSpec &spec,
    ChannelSample sample,
    const JointState &in,
    std::string_view control,
    std::string_view data,
    RandomStream &rng) {
    const auto &flag = sample.flag();
    check_dims(spec, flag);
    if (in.dim_of(control) != spec.c || in.dim_of(data) != spec.d) {
        throw ShapeError("apply_retro: control/data register dimensions do not match the channel");
    }
    JointState state = in;
    if (spec.variant == RetroVariant::dephased) {
        state = born_collapse(state, data, OrthonormalBasis::computational(spec.d), rng).post;
    }
    auto m = born_measure(state, control, flag.basis, rng);
    m.post.apply(data, flag.unitaries[m.outcome].matrix());
    RetroAccess::set_hidden(sample, m.outcome);
    return {std::move(m.post), std::move(sample)};
}

RetroDensityOutput apply_retro(
    const RetroChannelSpec &spec,
    ChannelSample sample,
    const DensityOperator &in,
    std::span<const std::size_t> dims,
    std::size_t control,
    std::size_t data,
    RandomStream &rng) {
    const auto &flag = sample.flag();
    check_dims(spec, flag);
    if (control >= dims.size() || data >= dims.size() || control == data || dims[control] != spec.c ||
        dims[data] != spec.d) {
        throw ShapeError("apply_retro: control/data factors do not match the channel");
    }
    auto embed = [&](std::size_t factor, const Matrix &op) {
        Matrix full = Matrix::identity(1);
        for (std::size_t k = 0; k < dims.size(); k++) {
            full = kron(full, k == factor ? op : Matrix::identity(dims[k]));
        }
        return full;
    };
    Matrix rho = in.matrix();
    if (spec.variant == RetroVariant::dephased) {
        Matrix deph(rho.rows(), rho.cols());
        for (std::size_t k = 0; k < spec.d; k++) {
            Matrix proj(spec.d, spec.d);
            proj(k, k) = 1.0;
            Matrix p = embed(data, proj);
            deph += p * rho * p;
        }
        rho = std::move(deph);
    }
    auto m = born_measure(DensityOperator(std::move(rho), 1e-8), dims, control, flag.basis, rng);
    std::size_t data_after = data > control ? data - 1 : data;
    Matrix u = Matrix::identity(1);
    for (std::size_t k = 0; k < m.dims.size(); k++) {
        u = kron(u, k == data_after ? flag.unitaries[m.outcome].matrix() : Matrix::identity(m.dims[k]));
    }
    RetroAccess::set_hidden(sample, m.outcome);
    return {DensityOperator(u * m.post.matrix() * u.adjoint(), 1e-8), std::move(m.dims), std::move(sample)};
}

KrausChannel flag_channel(const RetroChannelSpec &spec, const PublicFlag &flag) {
    check_dims(spec, flag);
    const std::size_t c = spec.c;
    const std::size_t d = spec.d;
    std::vector<Matrix> kraus;
    for (std::size_t j = 0; j < c; j++) {
        Matrix bra(1, c);
        for (std::size_t i = 0; i < c; i++) {
            bra(0, i) = std::conj(flag.basis[j][i]);
        }
        const Matrix &u = flag.unitaries[j].matrix();
        if (spec.variant == RetroVariant::standard) {
            kraus.push_back(kron(bra, u));
        } else {
            for (std::size_t k = 0; k < d; k++) {
                Matrix proj(d, d);
                proj(k, k) = 1.0;
                kraus.push_back(kron(bra, u * proj));
            }
        }
    }
    return KrausChannel("retro-flag", std::move(kraus));
}

KrausChannel to_kraus(const RetroChannelSpec &spec) {
    if (!spec.finite()) {
        throw UnsupportedRepresentation(
            "Kraus/Choi representations need finite flag ensembles; use the Monte Carlo estimators for Haar flags");
    }
    spec.validate();
    const std::size_t nb = spec.basis_count();
    const std::size_t nu = spec.unitary_tuple_count();
    const std::size_t nf = nb * nu;
    const double w = std::sqrt(1.0 / static_cast<double>(nf));
    std::vector<Matrix> kraus;
    for (std::size_t b = 0; b < nb; b++) {
        for (std::size_t u = 0; u < nu; u++) {
            Matrix ket(nf, 1);
            ket(b * nu + u, 0) = w;
            KrausChannel n = flag_channel(spec, finite_flag(spec, b, u));
            for (const auto &k : n.kraus()) {
                kraus.push_back(kron(k, ket));
            }
        }
    }
    return KrausChannel(spec.variant == RetroVariant::standard ? "retro-finite" : "dephased-retro-finite", std::move(kraus));
}

void SimplifiedChannelSpec::validate() const {
    for (std::size_t b = 0; b < 2; b++) {
        if (bases[b].dim() != 2) {
            throw ValidityError("simplified channel bases must be qubit bases");
        }
        if (trigger[b] > 1) {
            throw DomainError("trigger outcome must be 0 or 1");
        }
    }
    for (std::size_t j = 0; j < 2; j++) {
        for (std::size_t k = 0; k < 2; k++) {
            double o = std::norm(inner(bases[0][j].amplitudes(), bases[1][k].amplitudes()));
            if (std::abs(o - 0.5) > 1e-10) {
                throw ValidityError("simplified channel bases are not mutually unbiased");
            }
        }
    }
}

double no_depolarization_probability(const SimplifiedChannelSpec &spec, std::size_t basis_bit, const StateVector &control) {
    if (control.dim() != 2 || basis_bit > 1) {
        throw ShapeError("simplified channel takes a qubit control and a basis bit");
    }
    const auto &t = spec.bases[basis_bit][spec.trigger[basis_bit]];
    return 1.0 - std::norm(inner(t.amplitudes(), control.amplitudes()));
}

SimplifiedOutput apply_simplified(
    const SimplifiedChannelSpec &spec, const StateVector &control, const DensityOperator &data, RandomStream &rng) {
    if (control.dim() != 2 || data.dim() != 2) {
        throw ShapeError("simplified channel acts on qubits");
    }
    std::size_t b = rng.coin() ? 1 : 0;
    auto m = born_measure(JointState("control", control), "control", spec.bases[b], rng);
    bool depolarized = m.outcome == spec.trigger[b];
    return {b, depolarized ? DensityOperator::maximally_mixed(2) : data, m.outcome, depolarized};
}

SimplifiedJointOutput apply_simplified(
    const SimplifiedChannelSpec &spec,
    const JointState &in,
    std::string_view control,
    std::string_view data,
    RandomStream &rng) {
    if (in.dim_of(control) != 2 || in.dim_of(data) != 2) {
        throw ShapeError("simplified channel acts on qubits");
    }
    std::size_t b = rng.coin() ? 1 : 0;
    auto m = born_measure(in, control, spec.bases[b], rng);
    bool depolarized = m.outcome == spec.trigger[b];
    if (depolarized) {
        m.post.apply(data, pauli(static_cast<int>(rng.uniform_int(4))));
    }
    return {b, std::move(m.post), m.outcome, depolarized};
}

KrausChannel simplified_flag_channel(const SimplifiedChannelSpec &spec, std::size_t basis_bit) {
    if (basis_bit > 1) {
        throw DomainError("basis bit must be 0 or 1");
    }
    std::vector<Matrix> kraus;
    for (std::size_t j = 0; j < 2; j++) {
        Matrix bra(1, 2);
        for (std::size_t i = 0; i < 2; i++) {
            bra(0, i) = std::conj(spec.bases[basis_bit][j][i]);
        }
        if (j == spec.trigger[basis_bit]) {
            for (int a = 0; a < 4; a++) {
                kraus.push_back(kron(bra, 0.5 * pauli(a)));
            }
        } else {
            kraus.push_back(kron(bra, pauli(0)));
        }
    }
    return KrausChannel("simplified-flag", std::move(kraus));
}

}  // namespace retrocap
