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
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "retrocap/joint_state.hpp"
#include "retrocap/kraus.hpp"
#include "retrocap/random.hpp"
#include "retrocap/states.hpp"

namespace retrocap {

enum class RetroVariant {
    standard,
    /// Data input is dephased in the computational basis before the conditional unitary.
    dephased,
};

struct HaarEnsemble {};
using UnitaryTuple = std::vector<UnitaryOperator>;
using BasisEnsemble = std::variant<HaarEnsemble, std::vector<OrthonormalBasis>>;
using UnitaryEnsemble = std::variant<HaarEnsemble, std::vector<UnitaryTuple>>;

/// Parameters of a retrocorrectable channel R_{c,d}: a c-dimensional control input measured in
/// a random basis B, whose (hidden) outcome j selects which of c random unitaries acts on the
/// d-dimensional data input. The classical control output is (B, {U}).
struct RetroChannelSpec {
    std::size_t c = 2;
    std::size_t d = 2;
    RetroVariant variant = RetroVariant::standard;
    BasisEnsemble bases = HaarEnsemble{};
    UnitaryEnsemble unitaries = HaarEnsemble{};

    static RetroChannelSpec standard(std::size_t c, std::size_t d);
    static RetroChannelSpec dephased(std::size_t c, std::size_t d);
    /// Qubit channel with bases {Z, X} and every pair of Paulis as unitary tuples.
    static RetroChannelSpec pauli_discretization(RetroVariant variant);

    /// Copy whose unitary ensemble always yields all-identity tuples.
    RetroChannelSpec with_identity_unitaries() const;

    bool finite() const;
    std::size_t basis_count() const;
    std::size_t unitary_tuple_count() const;
    /// Number of distinct flag values (finite ensembles only).
    std::size_t flag_count() const;

    /// Throws DomainError / ValidityError on bad parameters or ensemble members.
    void validate() const;
};

/// The classical control output (B, {U}) that protocol parties may see.
struct PublicFlag {
    OrthonormalBasis basis;
    std::vector<UnitaryOperator> unitaries;
    /// Ensemble indices when drawn from finite ensembles.
    std::optional<std::size_t> basis_index;
    std::optional<std::size_t> unitary_index;
};

class AuditView;

/// One drawn flag plus, after the channel acted, the hidden measurement outcome j.
///
/// j is deliberately not reachable through the public interface: protocol code sees the flag
/// only. Verification code reads it through AuditView.
class ChannelSample {
   public:
    explicit ChannelSample(PublicFlag flag) : flag_(std::move(flag)) {
    }

    const PublicFlag &flag() const {
        return flag_;
    }
    bool applied() const {
        return hidden_.has_value();
    }

   private:
    friend class AuditView;
    friend struct RetroAccess;

    PublicFlag flag_;
    std::optional<std::size_t> hidden_;
};

/// Audit-only access to the hidden outcome of a channel use.
class AuditView {
   public:
    static std::optional<std::size_t> hidden_outcome(const ChannelSample &sample) {
        return sample.hidden_;
    }
};

ChannelSample sample_flag(const RetroChannelSpec &spec, RandomStream &rng);

struct RetroOutput {
    JointState state;
    ChannelSample sample;
};

/// One use of the channel on a joint pure state: measures register `control` in B (Born
/// sampled; the register is removed), dephases `data` first for the dephased variant, then
/// applies U_j to `data`. Other registers are untouched.
RetroOutput apply_retro(
    const RetroChannelSpec &spec,
    ChannelSample sample,
    const JointState &in,
    std::string_view control,
    std::string_view data,
    RandomStream &rng);

struct RetroDensityOutput {
    DensityOperator state;
    std::vector<std::size_t> dims;
    ChannelSample sample;
};

/// Density-operator form of apply_retro on a state over `dims`. Dephasing is applied exactly.
RetroDensityOutput apply_retro(
    const RetroChannelSpec &spec,
    ChannelSample sample,
    const DensityOperator &in,
    std::span<const std::size_t> dims,
    std::size_t control,
    std::size_t data,
    RandomStream &rng);

/// Fixed-flag channel on control (x) data -> data (the outcome j is traced out).
KrausChannel flag_channel(const RetroChannelSpec &spec, const PublicFlag &flag);

/// Finite-ensemble channel on control (x) data -> data (x) flag, the flag being a classical
/// register of dimension flag_count() (index basis_index * tuple_count + unitary_index).
/// Throws UnsupportedRepresentation for Haar ensembles.
KrausChannel to_kraus(const RetroChannelSpec &spec);

/// Flag with the given ensemble indices (finite ensembles only).
PublicFlag finite_flag(const RetroChannelSpec &spec, std::size_t basis_index, std::size_t unitary_index);

/// Simplified partially-retrocorrectable qubit channel: the control is measured in one of two
/// fixed conjugate bases chosen uniformly; a designated "trigger" outcome fully depolarizes the
/// data qubit. The control output is the basis bit only.
struct SimplifiedChannelSpec {
    std::array<OrthonormalBasis, 2> bases{OrthonormalBasis::computational(2), OrthonormalBasis::hadamard()};
    std::array<std::size_t, 2> trigger{1, 1};

    /// Throws ValidityError unless the bases are mutually unbiased within 1e-10.
    void validate() const;
};

/// P(no depolarization | basis b) for a pure control state.
double no_depolarization_probability(const SimplifiedChannelSpec &spec, std::size_t basis_bit, const StateVector &control);

struct SimplifiedOutput {
    std::size_t basis_bit;
    DensityOperator data;
    std::size_t hidden_outcome;
    bool depolarized;
};

SimplifiedOutput apply_simplified(
    const SimplifiedChannelSpec &spec, const StateVector &control, const DensityOperator &data, RandomStream &rng);

struct SimplifiedJointOutput {
    std::size_t basis_bit;
    JointState state;
    std::size_t hidden_outcome;
    bool depolarized;
};

/// Joint-state form. Full depolarization is realized as a uniformly random Pauli on `data`,
/// whose average is the replacement map rho -> I/2.
SimplifiedJointOutput apply_simplified(
    const SimplifiedChannelSpec &spec,
    const JointState &in,
    std::string_view control,
    std::string_view data,
    RandomStream &rng);

/// Basis-conditioned channel on control (x) data -> data.
KrausChannel simplified_flag_channel(const SimplifiedChannelSpec &spec, std::size_t basis_bit);

}  // namespace retrocap
