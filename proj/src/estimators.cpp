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

#include "retrocap/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "retrocap/eigen.hpp"
#include "retrocap/entropy.hpp"
#include "retrocap/errors.hpp"
#include "retrocap/haar.hpp"

namespace retrocap {

Ensemble::Ensemble(std::vector<double> probabilities, std::vector<DensityOperator> states)
    : probs_(std::move(probabilities)), states_(std::move(states)) {
    if (probs_.empty()) {
        throw DomainError("ensemble is empty");
    }
    if (probs_.size() != states_.size()) {
        throw ShapeError("ensemble needs one probability per state");
    }
    double total = 0;
    for (double p : probs_) {
        if (p < 0) {
            throw ValidityError("ensemble probability is negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw ValidityError("ensemble probabilities do not sum to 1");
    }
    for (const auto &s : states_) {
        if (s.dim() != states_.front().dim()) {
            throw ShapeError("ensemble states have different dimensions");
        }
    }
}

Ensemble Ensemble::uniform(std::vector<DensityOperator> states) {
    if (states.empty()) {
        throw DomainError("ensemble is empty");
    }
    std::vector<double> p(states.size(), 1.0 / static_cast<double>(states.size()));
    return Ensemble(std::move(p), std::move(states));
}

Ensemble Ensemble::basis_states(const OrthonormalBasis &basis) {
    std::vector<DensityOperator> states;
    for (const auto &v : basis.vectors()) {
        states.push_back(DensityOperator::pure(v));
    }
    return uniform(std::move(states));
}

double holevo_chi(const KrausChannel &channel, const Ensemble &ensemble) {
    if (ensemble.dim() != channel.input_dim()) {
        throw ShapeError("ensemble dimension does not match the channel input");
    }
    const std::size_t n = channel.output_dim();
    Matrix avg(n, n);
    double avg_entropy = 0;
    for (std::size_t i = 0; i < ensemble.size(); i++) {
        double p = ensemble.probabilities()[i];
        Matrix out = channel.apply(ensemble.states()[i].matrix());
        avg_entropy += p * entropy_bits(out);
        avg += p * out;
    }
    return std::max(0.0, entropy_bits(avg) - avg_entropy);
}

double holevo_chi(const RetroChannelSpec &spec, const Ensemble &ensemble) {
    if (!spec.finite()) {
        throw UnsupportedRepresentation("holevo_chi needs finite flag ensembles; use holevo_retro_mc");
    }
    spec.validate();
    // The flag is classical and independent of the input, so chi splits into the flag average
    // of the fixed-flag Holevo quantities.
    const std::size_t nb = spec.basis_count();
    const std::size_t nu = spec.unitary_tuple_count();
    double total = 0;
    for (std::size_t b = 0; b < nb; b++) {
        for (std::size_t u = 0; u < nu; u++) {
            total += holevo_chi(flag_channel(spec, finite_flag(spec, b, u)), ensemble);
        }
    }
    return total / static_cast<double>(nb * nu);
}

namespace {

bool use_reduced(const RetroChannelSpec &spec, FlagSampling flags) {
    return flags == FlagSampling::reduced && !spec.finite() &&
           std::holds_alternative<HaarEnsemble>(spec.bases) && std::holds_alternative<HaarEnsemble>(spec.unitaries);
}

std::vector<double> squared_moduli(const StateVector &v) {
    std::vector<double> p(v.dim());
    for (std::size_t k = 0; k < v.dim(); k++) {
        p[k] = std::norm(v[k]);
    }
    return p;
}

/// Outcome distribution for control |0> and the flag's unitaries.
struct FlagDraw {
    std::vector<double> p;
    std::vector<Matrix> unitaries;
};

FlagDraw draw_full(const RetroChannelSpec &spec, RandomStream &rng) {
    ChannelSample s = sample_flag(spec, rng);
    FlagDraw out;
    for (std::size_t j = 0; j < spec.c; j++) {
        out.p.push_back(std::norm(s.flag().basis[j][0]));
        out.unitaries.push_back(s.flag().unitaries[j].matrix());
    }
    return out;
}

/// Entropy of sum_j p_j |v_j><v_j| given the Gram overlaps g(j, k) = <v_j|v_k>.
double mixture_entropy_from_gram(std::span<const double> p, const Matrix &overlaps) {
    const std::size_t n = p.size();
    Matrix g(n, n);
    for (std::size_t j = 0; j < n; j++) {
        for (std::size_t k = 0; k < n; k++) {
            g(j, k) = std::sqrt(p[j] * p[k]) * overlaps(j, k);
        }
    }
    return entropy_bits(g);
}

double two_state_entropy(double p0, double overlap) {
    auto [hi, lo] = mixture_two_pure_eigs(p0, std::clamp(overlap, 0.0, 1.0));
    double eigs[2] = {hi, lo};
    return entropy_of_spectrum(eigs);
}

void check_samples(std::uint64_t samples) {
    if (samples < 1000) {
        throw DomainError("Monte Carlo estimators need at least 1000 samples");
    }
}

}  // namespace

double holevo_retro_sample(const RetroChannelSpec &spec, RandomStream &rng, EntropyPath path, FlagSampling flags) {
    const std::size_t c = spec.c;
    const std::size_t d = spec.d;
    // Data input |0> is invariant under computational dephasing, so both variants share this.
    std::vector<double> p;
    std::vector<CVector> v;
    if (use_reduced(spec, flags)) {
        p = squared_moduli(haar_state(c, rng));
        for (std::size_t j = 0; j < c; j++) {
            v.push_back(haar_state(d, rng).amplitudes());
        }
    } else {
        FlagDraw f = draw_full(spec, rng);
        p = std::move(f.p);
        for (const auto &u : f.unitaries) {
            v.push_back(u.column(0));
        }
    }
    double s;
    if (path == EntropyPath::automatic && c == 2) {
        s = two_state_entropy(p[0], std::norm(inner(v[0], v[1])));
    } else if (d <= c) {
        Matrix rho(d, d);
        for (std::size_t j = 0; j < c; j++) {
            for (std::size_t r = 0; r < d; r++) {
                Complex a = p[j] * v[j][r];
                for (std::size_t col = r; col < d; col++) {
                    rho(r, col) += a * std::conj(v[j][col]);
                }
            }
        }
        for (std::size_t r = 0; r < d; r++) {
            for (std::size_t col = 0; col < r; col++) {
                rho(r, col) = std::conj(rho(col, r));
            }
        }
        s = entropy_bits(rho);
    } else {
        Matrix overlaps(c, c);
        for (std::size_t j = 0; j < c; j++) {
            for (std::size_t k = 0; k < c; k++) {
                overlaps(j, k) = inner(v[j], v[k]);
            }
        }
        s = mixture_entropy_from_gram(p, overlaps);
    }
    return std::log2(static_cast<double>(d)) - s;
}

double coherent_retro_sample(const RetroChannelSpec &spec, RandomStream &rng, EntropyPath path, FlagSampling flags) {
    if (spec.variant == RetroVariant::dephased) {
        throw DomainError("coherent information is not estimated for the dephased variant");
    }
    const std::size_t c = spec.c;
    const std::size_t d = spec.d;
    FlagDraw f;
    if (use_reduced(spec, flags)) {
        f.p = squared_moduli(haar_state(c, rng));
        for (std::size_t j = 0; j < c; j++) {
            f.unitaries.push_back(haar_unitary(d, rng).matrix());
        }
    } else {
        f = draw_full(spec, rng);
    }
    const double dd = static_cast<double>(d);
    auto overlap = [&](std::size_t j, std::size_t k) {
        // <Phi|(I (x) U_j^dagger U_k)|Phi> = tr(U_j^dagger U_k) / d.
        Complex t = 0;
        const Matrix &a = f.unitaries[j];
        const Matrix &b = f.unitaries[k];
        for (std::size_t r = 0; r < d; r++) {
            for (std::size_t col = 0; col < d; col++) {
                t += std::conj(a(r, col)) * b(r, col);
            }
        }
        return t / dd;
    };
    double s;
    if (path == EntropyPath::automatic && c == 2) {
        s = two_state_entropy(f.p[0], std::norm(overlap(0, 1)));
    } else if (c <= d * d) {
        Matrix overlaps(c, c);
        for (std::size_t j = 0; j < c; j++) {
            for (std::size_t k = 0; k < c; k++) {
                overlaps(j, k) = overlap(j, k);
            }
        }
        s = mixture_entropy_from_gram(f.p, overlaps);
    } else {
        // Vectorized states vec(U_j)/sqrt(d) on reference (x) output.
        Matrix rho(d * d, d * d);
        for (std::size_t j = 0; j < c; j++) {
            CVector vec(d * d);
            for (std::size_t r = 0; r < d; r++) {
                for (std::size_t col = 0; col < d; col++) {
                    vec[col * d + r] = f.unitaries[j](r, col) / std::sqrt(dd);
                }
            }
            rho += f.p[j] * Matrix::outer(vec, vec);
        }
        s = entropy_bits(rho);
    }
    return std::log2(dd) - s;
}

Estimate holevo_retro_mc(const RetroChannelSpec &spec, const McOptions &options) {
    check_samples(options.samples);
    spec.validate();
    return run_monte_carlo(
        "C_H",
        options.samples,
        options.seed,
        options.workers,
        [&](RandomStream &rng) {
            return holevo_retro_sample(spec, rng, options.entropy, options.flags);
        },
        options.batch_size);
}

Estimate holevo_retro_mc(std::size_t c, std::size_t d, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    McOptions o;
    o.samples = samples;
    o.seed = seed;
    o.workers = workers;
    return holevo_retro_mc(RetroChannelSpec::standard(c, d), o);
}

Estimate coherent_info_retro_mc(const RetroChannelSpec &spec, const McOptions &options) {
    check_samples(options.samples);
    spec.validate();
    if (spec.variant == RetroVariant::dephased) {
        throw DomainError("coherent information is not estimated for the dephased variant");
    }
    return run_monte_carlo(
        "I_c",
        options.samples,
        options.seed,
        options.workers,
        [&](RandomStream &rng) {
            return coherent_retro_sample(spec, rng, options.entropy, options.flags);
        },
        options.batch_size);
}

Estimate coherent_info_retro_mc(std::size_t c, std::size_t d, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    McOptions o;
    o.samples = samples;
    o.seed = seed;
    o.workers = workers;
    return coherent_info_retro_mc(RetroChannelSpec::standard(c, d), o);
}

StateVector simplified_control(double t) {
    return StateVector::normalized({std::cos(t / 2), std::sin(t / 2)});
}

double simplified_chi(const SimplifiedChannelSpec &spec, const StateVector &control) {
    spec.validate();
    double total = 0;
    for (std::size_t b = 0; b < 2; b++) {
        double q = no_depolarization_probability(spec, b, control);
        total += 1.0 - binary_entropy(std::clamp((1.0 - q) / 2, 0.0, 1.0));
    }
    return total / 2;
}

namespace {

/// Data-only channel obtained by feeding the fixed control state into the basis-b channel.
KrausChannel simplified_data_channel(const SimplifiedChannelSpec &spec, std::size_t b, const StateVector &control) {
    Matrix embed = kron(Matrix::from_columns({control.amplitudes()}), Matrix::identity(2));
    std::vector<Matrix> kraus;
    KrausChannel n = simplified_flag_channel(spec, b);
    for (const auto &k : n.kraus()) {
        kraus.push_back(k * embed);
    }
    return KrausChannel("simplified-data", std::move(kraus));
}

}  // namespace

Estimate simplified_chi_mc(
    const SimplifiedChannelSpec &spec,
    const StateVector &control,
    std::uint64_t samples,
    std::uint64_t seed,
    unsigned workers) {
    spec.validate();
    if (control.dim() != 2) {
        throw ShapeError("simplified channel control must be a qubit");
    }
    const std::array<KrausChannel, 2> channels{
        simplified_data_channel(spec, 0, control), simplified_data_channel(spec, 1, control)};
    const Matrix mixed = DensityOperator::maximally_mixed(2).matrix();
    return run_monte_carlo("C_H", samples, seed, workers, [&](RandomStream &rng) {
        const KrausChannel &n = channels[rng.coin() ? 1 : 0];
        std::size_t x = rng.coin() ? 1 : 0;
        Matrix in(2, 2);
        in(x, x) = 1.0;
        return entropy_bits(n.apply(mixed)) - entropy_bits(n.apply(in));
    });
}

ChiScan simplified_chi_scan(
    const SimplifiedChannelSpec &spec,
    std::size_t resolution,
    std::uint64_t mc_samples,
    std::uint64_t seed,
    unsigned workers) {
    if (resolution < 64) {
        throw DomainError("simplified_chi_scan needs at least 64 grid points");
    }
    spec.validate();
    const double two_pi = 2 * std::numbers::pi;
    auto chi_at = [&](double t) {
        return simplified_chi(spec, simplified_control(t));
    };
    ChiScan scan;
    std::size_t best = 0;
    for (std::size_t k = 0; k < resolution; k++) {
        double t = two_pi * static_cast<double>(k) / static_cast<double>(resolution);
        scan.curve.push_back({t, chi_at(t)});
        if (scan.curve[k].chi > scan.curve[best].chi) {
            best = k;
        }
    }
    scan.grid_argmax_t = scan.curve[best].t;
    scan.grid_max = scan.curve[best].chi;

    const double h = two_pi / static_cast<double>(resolution);
    double lo = scan.grid_argmax_t - h;
    double hi = scan.grid_argmax_t + h;
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = chi_at(x1);
    double f2 = chi_at(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-12; it++) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = chi_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = chi_at(x1);
        }
    }
    double t_ref = (lo + hi) / 2;
    double f_ref = chi_at(t_ref);
    if (f_ref >= scan.grid_max) {
        scan.argmax_t = std::fmod(t_ref + two_pi, two_pi);
        scan.max_value = f_ref;
    } else {
        scan.argmax_t = scan.grid_argmax_t;
        scan.max_value = scan.grid_max;
    }
    scan.eigenstate_value = chi_at(0.0);
    scan.eigenstate_claim_violated = scan.max_value > scan.eigenstate_value + 1e-9;

    std::vector<std::size_t> checks{0, (resolution + 2) / 4, best};
    for (std::size_t i = 0; i < checks.size(); i++) {
        const auto &pt = scan.curve[checks[i] % resolution];
        Estimate e = simplified_chi_mc(spec, simplified_control(pt.t), mc_samples, seed + i, workers);
        bool agrees = std::abs(e.mean - pt.chi) <= 3 * e.std_error + 1e-12;
        scan.cross_checks.push_back({pt.t, pt.chi, std::move(e), agrees});
    }
    return scan;
}

double ea_mutual_info(const KrausChannel &channel, const DensityOperator &rho) {
    const std::size_t d = channel.input_dim();
    if (rho.dim() != d) {
        throw ShapeError("input state dimension does not match the channel");
    }
    EigenDecomposition e = eig_hermitian(rho.matrix());
    CVector psi(d * d);
    for (std::size_t k = 0; k < d; k++) {
        double w = std::sqrt(std::max(0.0, e.values[k]));
        for (std::size_t i = 0; i < d; i++) {
            psi[i * d + k] = w * e.vectors(i, k);
        }
    }
    Matrix joint = channel.apply_on_first(Matrix::outer(psi, psi), d);
    return entropy_of_spectrum(e.values) + entropy_bits(channel.apply(rho.matrix())) - entropy_bits(joint);
}

namespace {

/// Input-state parametrization for the EA maximizer.
struct InputFamily {
    std::size_t d;

    std::size_t params() const {
        return d == 2 ? 3 : 2 * d * d;
    }

    void normalize(std::vector<double> &x) const {
        if (d != 2) {
            return;
        }
        double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (r > 1) {
            for (auto &v : x) {
                v /= r;
            }
        }
    }

    Matrix state(const std::vector<double> &x) const {
        if (d == 2) {
            Matrix m = pauli(0);
            for (int k = 0; k < 3; k++) {
                m += Complex(x[k]) * pauli(k + 1);
            }
            m *= 0.5;
            return m;
        }
        Matrix a(d, d);
        for (std::size_t k = 0; k < d * d; k++) {
            a.data()[k] = Complex(x[2 * k], x[2 * k + 1]);
        }
        Matrix m = a * a.adjoint();
        m *= 1.0 / m.trace().real();
        return m;
    }
};

std::vector<std::vector<double>> ea_starts(const InputFamily &fam, std::size_t n, std::uint64_t seed) {
    std::vector<std::vector<double>> starts;
    if (fam.d == 2) {
        starts.push_back({0, 0, 0});
        const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
        const std::size_t m = n > 1 ? n - 1 : 0;
        for (std::size_t k = 0; k < m; k++) {
            double z = 1 - 2 * (static_cast<double>(k) + 0.5) / static_cast<double>(m);
            double r = std::sqrt(1 - z * z);
            double phi = golden * static_cast<double>(k);
            starts.push_back({0.5 * r * std::cos(phi), 0.5 * r * std::sin(phi), 0.5 * z});
        }
        return starts;
    }
    std::vector<double> id(fam.params(), 0.0);
    for (std::size_t i = 0; i < fam.d; i++) {
        id[2 * (i * fam.d + i)] = 1.0;
    }
    starts.push_back(id);
    RandomStream rng(seed);
    for (std::size_t k = 1; k < n; k++) {
        std::vector<double> x(fam.params());
        for (auto &v : x) {
            v = rng.normal();
        }
        starts.push_back(std::move(x));
    }
    return starts;
}

}  // namespace

EaResult maximize_ea(const KrausChannel &channel, const EaOptions &options) {
    const std::size_t d = channel.input_dim();
    if (d > 8) {
        throw DomainError("maximize_ea supports input dimension at most 8");
    }
    if (options.starts == 0) {
        throw DomainError("maximize_ea needs at least one start");
    }
    InputFamily fam{d};
    EaResult result;
    result.value = -1;
    auto objective = [&](const std::vector<double> &x) {
        result.evaluations++;
        return ea_mutual_info(channel, DensityOperator(fam.state(x), 1e-8));
    };
    for (auto x : ea_starts(fam, options.starts, options.seed)) {
        fam.normalize(x);
        double fx = objective(x);
        result.start_values.push_back(fx);
        double step = d == 2 ? 0.25 : 0.5;
        std::size_t sweeps = 0;
        while (step >= options.step_tolerance) {
            if (++sweeps > options.max_sweeps) {
                result.converged = false;
                break;
            }
            bool improved = false;
            for (std::size_t i = 0; i < x.size(); i++) {
                for (double sign : {1.0, -1.0}) {
                    auto y = x;
                    y[i] += sign * step;
                    fam.normalize(y);
                    double fy = objective(y);
                    if (fy > fx + 1e-15) {
                        x = std::move(y);
                        fx = fy;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) {
                step /= 2;
            }
        }
        result.final_values.push_back(fx);
        if (fx > result.value) {
            result.value = fx;
            result.argmax = DensityOperator(fam.state(x), 1e-8);
        }
    }
    return result;
}

std::size_t trend_control_dim(std::size_t d) {
    if (d < 2) {
        throw DomainError("trend dimension must be at least 2");
    }
    std::size_t l = 0;
    while ((std::size_t{1} << l) < d) {
        l++;
    }
    return d * l * l * l;
}

std::vector<TrendRow> trend_scan(
    std::span<const std::size_t> dims, std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    for (std::size_t k = 0; k < dims.size(); k++) {
        if (dims[k] < 2 || dims[k] > 32 || (k > 0 && dims[k] <= dims[k - 1])) {
            throw DomainError("trend dims must be strictly ascending and within [2, 32]");
        }
    }
    std::vector<TrendRow> rows;
    for (std::size_t d : dims) {
        std::size_t c = trend_control_dim(d);
        rows.push_back({d, c, holevo_retro_mc(c, d, samples, seed, workers)});
    }
    return rows;
}

namespace {

constexpr std::array<std::string_view, 10> kKindNames{"C", "C_H", "C_B", "C_2", "C_E", "Q", "I_c", "Q_B", "Q_2", "Q_E"};
constexpr std::array<std::string_view, 3> kTagNames{"computed", "protocol-lower-bound", "paper-reported-unverified"};
constexpr std::array<std::string_view, 3> kPrecisionNames{"exact", "monte-carlo", "optimizer"};

template <typename E, std::size_t N>
E parse_name(const std::array<std::string_view, N> &names, std::string_view s, const char *what) {
    for (std::size_t k = 0; k < N; k++) {
        if (names[k] == s) {
            return static_cast<E>(k);
        }
    }
    throw DomainError(std::string("unknown ") + what + ": " + std::string(s));
}

}  // namespace

std::string_view to_string(CapacityKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::string_view to_string(EvidenceTag tag) {
    return kTagNames[static_cast<std::size_t>(tag)];
}

std::string_view to_string(Precision precision) {
    return kPrecisionNames[static_cast<std::size_t>(precision)];
}

CapacityKind capacity_kind_from_string(std::string_view s) {
    return parse_name<CapacityKind>(kKindNames, s, "capacity kind");
}

EvidenceTag evidence_tag_from_string(std::string_view s) {
    return parse_name<EvidenceTag>(kTagNames, s, "evidence tag");
}

Precision precision_from_string(std::string_view s) {
    return parse_name<Precision>(kPrecisionNames, s, "precision");
}

void CapacityReport::add(CapacityEntry entry) {
    for (const auto &e : entries) {
        if (e.kind == entry.kind && e.tag == entry.tag && (entry.tag != EvidenceTag::protocol_lower_bound || e.method == entry.method)) {
            throw DomainError("report already has an entry for " + std::string(to_string(entry.kind)) + " (" +
                              std::string(to_string(entry.tag)) + ")");
        }
    }
    entries.push_back(std::move(entry));
}

void CapacityReport::add(CapacityKind kind, const Estimate &estimate, std::string method) {
    add(CapacityEntry{
        kind,
        EvidenceTag::computed,
        Precision::monte_carlo,
        estimate.mean,
        estimate.std_error,
        estimate.samples,
        estimate.seed,
        std::move(method)});
}

std::optional<CapacityEntry> CapacityReport::find(CapacityKind kind, EvidenceTag tag) const {
    std::optional<CapacityEntry> best;
    for (const auto &e : entries) {
        if (e.kind == kind && e.tag == tag && (!best || e.value > best->value)) {
            best = e;
        }
    }
    return best;
}

}  // namespace retrocap
