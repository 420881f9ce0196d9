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

#include "retrocap/joint_state.hpp"

#include <algorithm>
#include <cmath>

#include "retrocap/errors.hpp"

namespace retrocap {

JointState::JointState() : amps_{Complex{1.0}} {
}

JointState::JointState(std::string name, const StateVector &psi)
    : regs_{Register{std::move(name), psi.dim()}}, amps_(psi.amplitudes()) {
}

JointState::JointState(std::vector<Register> registers, CVector amplitudes)
    : regs_(std::move(registers)), amps_(std::move(amplitudes)) {
    std::size_t d = 1;
    for (const auto &r : regs_) {
        if (r.dim == 0) {
            throw ShapeError("register dimension must be positive");
        }
        d *= r.dim;
    }
    if (d != amps_.size()) {
        throw ShapeError("register dimensions do not match amplitude count");
    }
    for (std::size_t a = 0; a < regs_.size(); a++) {
        for (std::size_t b = a + 1; b < regs_.size(); b++) {
            if (regs_[a].name == regs_[b].name) {
                throw ShapeError("duplicate register name '" + regs_[a].name + "'");
            }
        }
    }
}

void JointState::attach(const JointState &other) {
    for (const auto &r : other.regs_) {
        if (has(r.name)) {
            throw ShapeError("register '" + r.name + "' already present");
        }
    }
    amps_ = kron(amps_, other.amps_);
    regs_.insert(regs_.end(), other.regs_.begin(), other.regs_.end());
}

void JointState::attach(std::string name, const StateVector &psi) {
    attach(JointState(std::move(name), psi));
}

void JointState::attach_pair(std::string a, std::string b, const StateVector &psi, std::size_t da, std::size_t db) {
    if (da * db != psi.dim()) {
        throw ShapeError("pair dimensions do not match state dimension");
    }
    attach(JointState({Register{std::move(a), da}, Register{std::move(b), db}}, psi.amplitudes()));
}

bool JointState::has(std::string_view name) const {
    return std::any_of(regs_.begin(), regs_.end(), [&](const Register &r) {
        return r.name == name;
    });
}

std::size_t JointState::index_of(std::string_view name) const {
    for (std::size_t k = 0; k < regs_.size(); k++) {
        if (regs_[k].name == name) {
            return k;
        }
    }
    throw ShapeError("no register named '" + std::string(name) + "'");
}

std::size_t JointState::dim_of(std::string_view name) const {
    return regs_[index_of(name)].dim;
}

JointState::Split JointState::split(std::size_t index) const {
    Split s{1, regs_[index].dim, 1};
    for (std::size_t k = 0; k < index; k++) {
        s.left *= regs_[k].dim;
    }
    for (std::size_t k = index + 1; k < regs_.size(); k++) {
        s.right *= regs_[k].dim;
    }
    return s;
}

void JointState::apply(std::string_view name, const Matrix &op) {
    auto s = split(index_of(name));
    if (op.rows() != s.dim || op.cols() != s.dim) {
        throw ShapeError("operator dimension does not match register '" + std::string(name) + "'");
    }
    CVector out(amps_.size());
    for (std::size_t l = 0; l < s.left; l++) {
        const std::size_t base = l * s.dim * s.right;
        for (std::size_t i = 0; i < s.dim; i++) {
            for (std::size_t j = 0; j < s.dim; j++) {
                Complex x = op(i, j);
                if (x == Complex{}) {
                    continue;
                }
                for (std::size_t r = 0; r < s.right; r++) {
                    out[base + i * s.right + r] += x * amps_[base + j * s.right + r];
                }
            }
        }
    }
    amps_ = std::move(out);
}

void JointState::rename(std::string_view from, std::string to) {
    if (has(to)) {
        throw ShapeError("register '" + to + "' already present");
    }
    regs_[index_of(from)].name = std::move(to);
}

void JointState::permute(const std::vector<std::string> &order) {
    if (order.size() != regs_.size()) {
        throw ShapeError("permutation must list every register");
    }
    std::vector<std::size_t> src(order.size());
    std::vector<Register> new_regs;
    for (std::size_t k = 0; k < order.size(); k++) {
        src[k] = index_of(order[k]);
        new_regs.push_back(regs_[src[k]]);
    }
    for (std::size_t a = 0; a < src.size(); a++) {
        for (std::size_t b = a + 1; b < src.size(); b++) {
            if (src[a] == src[b]) {
                throw ShapeError("permutation lists register '" + order[a] + "' twice");
            }
        }
    }
    const std::size_t n = regs_.size();
    // Stride of each old register in the old layout.
    std::vector<std::size_t> old_stride(n, 1);
    for (std::size_t k = n; k-- > 1;) {
        old_stride[k - 1] = old_stride[k] * regs_[k].dim;
    }
    CVector out(amps_.size());
    std::vector<std::size_t> digits(n, 0);
    for (std::size_t idx = 0; idx < amps_.size(); idx++) {
        std::size_t old_index = 0;
        for (std::size_t k = 0; k < n; k++) {
            old_index += digits[k] * old_stride[src[k]];
        }
        out[idx] = amps_[old_index];
        for (std::size_t k = n; k-- > 0;) {
            if (++digits[k] < new_regs[k].dim) {
                break;
            }
            digits[k] = 0;
        }
    }
    regs_ = std::move(new_regs);
    amps_ = std::move(out);
}

void JointState::merge(std::string_view a, std::string_view b, std::string merged) {
    std::vector<std::string> order;
    std::size_t ia = index_of(a);
    std::size_t ib = index_of(b);
    if (ia == ib) {
        throw ShapeError("cannot merge a register with itself");
    }
    for (std::size_t k = 0; k < regs_.size(); k++) {
        if (k == ib) {
            continue;
        }
        order.push_back(regs_[k].name);
        if (k == ia) {
            order.push_back(regs_[ib].name);
        }
    }
    permute(order);
    std::size_t pos = index_of(a);
    Register fused{std::move(merged), regs_[pos].dim * regs_[pos + 1].dim};
    regs_.erase(regs_.begin() + static_cast<std::ptrdiff_t>(pos), regs_.begin() + static_cast<std::ptrdiff_t>(pos + 2));
    regs_.insert(regs_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(fused));
}

Matrix JointState::reduced(const std::vector<std::string> &keep) const {
    std::vector<std::string> order = keep;
    for (const auto &r : regs_) {
        if (std::find(keep.begin(), keep.end(), r.name) == keep.end()) {
            order.push_back(r.name);
        }
    }
    JointState p = *this;
    p.permute(order);
    std::size_t kd = 1;
    for (std::size_t k = 0; k < keep.size(); k++) {
        kd *= p.regs_[k].dim;
    }
    const std::size_t rest = p.amps_.size() / kd;
    Matrix rho(kd, kd);
    for (std::size_t a = 0; a < kd; a++) {
        for (std::size_t b = a; b < kd; b++) {
            Complex s = 0;
            for (std::size_t r = 0; r < rest; r++) {
                s += p.amps_[a * rest + r] * std::conj(p.amps_[b * rest + r]);
            }
            rho(a, b) = s;
            rho(b, a) = std::conj(s);
        }
    }
    return rho;
}

double JointState::project_out(std::string_view name, std::span<const Complex> v) {
    std::size_t index = index_of(name);
    auto s = split(index);
    if (v.size() != s.dim) {
        throw ShapeError("projection vector does not match register '" + std::string(name) + "'");
    }
    CVector out(s.left * s.right);
    for (std::size_t l = 0; l < s.left; l++) {
        for (std::size_t i = 0; i < s.dim; i++) {
            Complex w = std::conj(v[i]);
            if (w == Complex{}) {
                continue;
            }
            for (std::size_t r = 0; r < s.right; r++) {
                out[l * s.right + r] += w * amps_[(l * s.dim + i) * s.right + r];
            }
        }
    }
    amps_ = std::move(out);
    regs_.erase(regs_.begin() + static_cast<std::ptrdiff_t>(index));
    double n2 = 0;
    for (auto x : amps_) {
        n2 += std::norm(x);
    }
    return n2;
}

void JointState::renormalize() {
    double n = norm(amps_);
    if (!(n > 0)) {
        throw ValidityError("cannot renormalize a zero state");
    }
    for (auto &x : amps_) {
        x /= n;
    }
}

namespace {

std::size_t sample_index(std::span<const double> probs, RandomStream &rng) {
    double total = 0;
    for (double p : probs) {
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw ValidityError("measurement probabilities sum to " + std::to_string(total));
    }
    double u = rng.uniform() * total;
    double acc = 0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < probs.size(); k++) {
        if (probs[k] > 0) {
            last_positive = k;
        }
        acc += probs[k];
        if (u < acc && probs[k] > 0) {
            return k;
        }
    }
    return last_positive;
}

}  // namespace

Measurement born_measure(const JointState &state, std::string_view name, const OrthonormalBasis &basis, RandomStream &rng) {
    if (state.dim_of(name) != basis.dim()) {
        throw ShapeError("basis dimension does not match register '" + std::string(name) + "'");
    }
    std::vector<JointState> branches;
    std::vector<double> probs;
    for (std::size_t j = 0; j < basis.dim(); j++) {
        JointState b = state;
        probs.push_back(b.project_out(name, basis[j].amplitudes()));
        branches.push_back(std::move(b));
    }
    std::size_t j = sample_index(probs, rng);
    JointState post = std::move(branches[j]);
    post.renormalize();
    return {j, probs[j], std::move(post)};
}

Measurement born_collapse(const JointState &state, std::string_view name, const OrthonormalBasis &basis, RandomStream &rng) {
    auto m = born_measure(state, name, basis, rng);
    // Re-insert the register in the observed basis state at its original position.
    std::vector<std::string> order;
    for (const auto &r : state.registers()) {
        order.push_back(r.name);
    }
    JointState rebuilt = m.post;
    rebuilt.attach(std::string(name), basis[m.outcome]);
    rebuilt.permute(order);
    m.post = std::move(rebuilt);
    return m;
}

DensityMeasurement born_measure(
    const DensityOperator &rho,
    std::span<const std::size_t> dims,
    std::size_t subsystem,
    const OrthonormalBasis &basis,
    RandomStream &rng) {
    std::size_t total = 1;
    for (auto d : dims) {
        total *= d;
    }
    if (total != rho.dim() || subsystem >= dims.size()) {
        throw ShapeError("born_measure: dims do not match the density operator");
    }
    if (dims[subsystem] != basis.dim()) {
        throw ShapeError("born_measure: basis dimension does not match the measured factor");
    }
    std::size_t left = 1, right = 1;
    for (std::size_t k = 0; k < subsystem; k++) {
        left *= dims[k];
    }
    for (std::size_t k = subsystem + 1; k < dims.size(); k++) {
        right *= dims[k];
    }
    const std::size_t dk = dims[subsystem];
    const std::size_t rest = left * right;
    const Matrix &m = rho.matrix();

    std::vector<Matrix> blocks;
    std::vector<double> probs;
    for (std::size_t j = 0; j < dk; j++) {
        const auto &b = basis[j].amplitudes();
        Matrix out(rest, rest);
        for (std::size_t lr = 0; lr < left; lr++) {
            for (std::size_t rr = 0; rr < right; rr++) {
                for (std::size_t lc = 0; lc < left; lc++) {
                    for (std::size_t rc = 0; rc < right; rc++) {
                        Complex s = 0;
                        for (std::size_t i = 0; i < dk; i++) {
                            for (std::size_t k = 0; k < dk; k++) {
                                s += std::conj(b[i]) * m((lr * dk + i) * right + rr, (lc * dk + k) * right + rc) * b[k];
                            }
                        }
                        out(lr * right + rr, lc * right + rc) = s;
                    }
                }
            }
        }
        probs.push_back(out.trace().real());
        blocks.push_back(std::move(out));
    }
    std::size_t j = sample_index(probs, rng);
    Matrix post = blocks[j];
    post *= 1.0 / probs[j];
    std::vector<std::size_t> rest_dims;
    for (std::size_t k = 0; k < dims.size(); k++) {
        if (k != subsystem) {
            rest_dims.push_back(dims[k]);
        }
    }
    return {j, probs[j], DensityOperator(std::move(post), 1e-8), std::move(rest_dims)};
}

}  // namespace retrocap
