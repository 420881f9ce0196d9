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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "retrocap/channels.hpp"
#include "retrocap/kraus.hpp"
#include "retrocap/parallel.hpp"
#include "retrocap/states.hpp"

namespace retrocap {

/// Finite ensemble of (probability, input state) pairs.
class Ensemble {
   public:
    /// Throws DomainError when empty, ValidityError when the probabilities are negative or do
    /// not sum to 1 within 1e-10, ShapeError on inconsistent dimensions.
    Ensemble(std::vector<double> probabilities, std::vector<DensityOperator> states);
    static Ensemble uniform(std::vector<DensityOperator> states);
    /// Uniform mixture of the pure states of a basis.
    static Ensemble basis_states(const OrthonormalBasis &basis);

    std::size_t size() const {
        return probs_.size();
    }
    std::size_t dim() const {
        return states_.front().dim();
    }
    const std::vector<double> &probabilities() const {
        return probs_;
    }
    const std::vector<DensityOperator> &states() const {
        return states_;
    }

   private:
    std::vector<double> probs_;
    std::vector<DensityOperator> states_;
};

/// chi = S(sum p_i N(rho_i)) - sum p_i S(N(rho_i)).
double holevo_chi(const KrausChannel &channel, const Ensemble &ensemble);
/// Holevo quantity of a finite-flag retro channel with the flag as part of the output. The
/// ensemble lives on control (x) data.
double holevo_chi(const RetroChannelSpec &spec, const Ensemble &ensemble);

/// How the per-sample mixture entropy is computed.
enum class EntropyPath {
    /// Closed-form two-state eigenvalues when c = 2, eigensolver otherwise.
    automatic,
    eigensolver,
};

/// How Haar flags are drawn.
enum class FlagSampling {
    /// Draw only what the estimand depends on (the outcome distribution and the images U_j|0>,
    /// or the U_j themselves), which is equal in law to drawing the full flag.
    reduced,
    /// Draw the whole flag with sample_flag.
    full,
};

struct McOptions {
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::uint64_t batch_size = 10000;
    EntropyPath entropy = EntropyPath::automatic;
    FlagSampling flags = FlagSampling::reduced;
};

/// One draw of log2 d - S(sum_j p_j U_j|0><0|U_j^dagger), p_j = |<b_j|0>|^2, for a random flag.
/// Finite ensembles always use full flag sampling.
double holevo_retro_sample(const RetroChannelSpec &spec, RandomStream &rng, EntropyPath path, FlagSampling flags);
/// One draw of log2 d - S(sum_j p_j (I (x) U_j)|Phi><Phi|(I (x) U_j)^dagger).
double coherent_retro_sample(const RetroChannelSpec &spec, RandomStream &rng, EntropyPath path, FlagSampling flags);

/// One-shot Holevo capacity of a retro channel with fixed control |0> and data |0>.
/// Throws DomainError for fewer than 1000 samples.
Estimate holevo_retro_mc(const RetroChannelSpec &spec, const McOptions &options);
Estimate holevo_retro_mc(std::size_t c, std::size_t d, std::uint64_t samples, std::uint64_t seed, unsigned workers = 1);

/// One-shot coherent information with the data maximally entangled with a reference.
/// Throws DomainError for the dephased variant or fewer than 1000 samples.
Estimate coherent_info_retro_mc(const RetroChannelSpec &spec, const McOptions &options);
Estimate coherent_info_retro_mc(
    std::size_t c, std::size_t d, std::uint64_t samples, std::uint64_t seed, unsigned workers = 1);

/// cos(t/2)|0> + sin(t/2)|1>: the Bloch great circle through the Z and X eigenstates.
StateVector simplified_control(double t);

/// Closed form 1/2 sum_b [1 - h2((1 - q_b)/2)], q_b = P(no depolarization | b).
double simplified_chi(const SimplifiedChannelSpec &spec, const StateVector &control);

/// Monte Carlo over the basis flag b and a uniform computational data bit x. Each draw is
/// S(N_b(I/2)) - S(N_b(|x><x|)), with N_b the basis-conditioned channel built from Kraus
/// operators and evaluated by the eigensolver.
Estimate simplified_chi_mc(
    const SimplifiedChannelSpec &spec,
    const StateVector &control,
    std::uint64_t samples,
    std::uint64_t seed,
    unsigned workers = 1);

struct ChiCurvePoint {
    double t;
    double chi;
};

struct ChiCrossCheck {
    double t;
    double closed_form;
    Estimate monte_carlo;
    /// |closed_form - mean| <= 3 stderr.
    bool agrees;
};

struct ChiScan {
    std::vector<ChiCurvePoint> curve;
    double grid_argmax_t = 0;
    double grid_max = 0;
    /// Golden-section refinement around the grid maximum.
    double argmax_t = 0;
    double max_value = 0;
    /// chi at the |0> eigenstate (t = 0).
    double eigenstate_value = 0;
    /// The maximum exceeds the eigenstate value, contradicting the claim that an eigenstate
    /// control is optimal.
    bool eigenstate_claim_violated = false;
    std::vector<ChiCrossCheck> cross_checks;
};

/// Scans t over [0, 2 pi) with `resolution` points (>= 64, else DomainError) and cross-checks
/// t = 0, t nearest pi/2 and the grid argmax by simplified_chi_mc.
ChiScan simplified_chi_scan(
    const SimplifiedChannelSpec &spec,
    std::size_t resolution,
    std::uint64_t mc_samples,
    std::uint64_t seed,
    unsigned workers = 1);

/// I(rho) = S(rho) + S(N(rho)) - S((N (x) id)(psi)) for a purification psi of rho.
double ea_mutual_info(const KrausChannel &channel, const DensityOperator &rho);

struct EaOptions {
    std::size_t starts = 20;
    double step_tolerance = 1e-6;
    std::size_t max_sweeps = 20000;
    std::uint64_t seed = 1;
};

struct EaResult {
    double value = 0;
    DensityOperator argmax = DensityOperator::maximally_mixed(1);
    /// False when some start ran out of sweeps; `value` is then the best found so far.
    bool converged = true;
    /// Objective at each start point and after ascent from it.
    std::vector<double> start_values;
    std::vector<double> final_values;
    std::size_t evaluations = 0;
};

/// Multi-start coordinate ascent of ea_mutual_info. Qubit inputs are parametrized by the Bloch
/// vector (first start at the center, the rest on a Fibonacci sphere of radius 1/2); larger
/// inputs by rho = A A^dagger / tr(A A^dagger). Throws DomainError for input dim > 8.
EaResult maximize_ea(const KrausChannel &channel, const EaOptions &options = {});

/// c = d * ceil(log2 d)^3, with c(2) = 2.
std::size_t trend_control_dim(std::size_t d);

struct TrendRow {
    std::size_t d;
    std::size_t c;
    Estimate estimate;
};

/// holevo_retro_mc(trend_control_dim(d), d) for each d, all with the same seed. `dims` must be
/// strictly ascending with entries in [2, 32].
std::vector<TrendRow> trend_scan(
    std::span<const std::size_t> dims, std::uint64_t samples, std::uint64_t seed, unsigned workers = 1);

enum class CapacityKind { C, C_H, C_B, C_2, C_E, Q, I_c, Q_B, Q_2, Q_E };
enum class EvidenceTag { computed, protocol_lower_bound, paper_reported_unverified };
enum class Precision { exact, monte_carlo, optimizer };

std::string_view to_string(CapacityKind kind);
std::string_view to_string(EvidenceTag tag);
std::string_view to_string(Precision precision);
/// Throw DomainError on unknown names.
CapacityKind capacity_kind_from_string(std::string_view s);
EvidenceTag evidence_tag_from_string(std::string_view s);
Precision precision_from_string(std::string_view s);

struct CapacityEntry {
    CapacityKind kind;
    EvidenceTag tag;
    Precision precision;
    double value;
    double std_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string method;

    bool operator==(const CapacityEntry &) const = default;
};

struct CapacityReport {
    std::string channel;
    std::vector<CapacityEntry> entries;

    /// One entry per (kind, tag), except protocol lower bounds, which may repeat with distinct
    /// methods. Throws DomainError on a duplicate.
    void add(CapacityEntry entry);
    void add(CapacityKind kind, const Estimate &estimate, std::string method);
    /// The entry of that kind and tag; for repeated lower bounds, the largest.
    std::optional<CapacityEntry> find(CapacityKind kind, EvidenceTag tag) const;

    bool operator==(const CapacityReport &) const = default;
};

}  // namespace retrocap
