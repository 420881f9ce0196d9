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

#include "retrocap/kraus.hpp"

#include <cmath>

#include "retrocap/errors.hpp"

namespace retrocap {

KrausChannel::KrausChannel(std::string label, std::vector<Matrix> kraus)
    : label_(std::move(label)), kraus_(std::move(kraus)) {
    if (kraus_.empty()) {
        throw ShapeError("channel needs at least one Kraus operator");
    }
    out_ = kraus_.front().rows();
    in_ = kraus_.front().cols();
    Matrix sum(in_, in_);
    for (const auto &k : kraus_) {
        if (k.rows() != out_ || k.cols() != in_) {
            throw ShapeError("Kraus operators have inconsistent shapes");
        }
        sum += k.adjoint() * k;
    }
    if (distance(sum, Matrix::identity(in_)) > 1e-8) {
        throw ValidityError("Kraus operators of '" + label_ + "' are not trace preserving");
    }
}

Matrix KrausChannel::apply(const Matrix &rho) const {
    if (rho.rows() != in_ || rho.cols() != in_) {
        throw ShapeError("channel input dimension mismatch");
    }
    Matrix out(out_, out_);
    for (const auto &k : kraus_) {
        out += k * rho * k.adjoint();
    }
    return out;
}

DensityOperator KrausChannel::apply(const DensityOperator &rho) const {
    return DensityOperator(apply(rho.matrix()), 1e-8);
}

Matrix KrausChannel::apply_on_first(const Matrix &joint, std::size_t ancilla_dim) const {
    if (joint.rows() != in_ * ancilla_dim || !joint.is_square()) {
        throw ShapeError("apply_on_first: joint operator dimension mismatch");
    }
    Matrix id = Matrix::identity(ancilla_dim);
    Matrix out(out_ * ancilla_dim, out_ * ancilla_dim);
    for (const auto &k : kraus_) {
        Matrix big = kron(k, id);
        out += big * joint * big.adjoint();
    }
    return out;
}

namespace {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("channel parameter p must lie in [0, 1]");
    }
}

}  // namespace

KrausChannel identity_qudit(std::size_t d) {
    return KrausChannel("identity-" + std::to_string(d), {Matrix::identity(d)});
}

KrausChannel classical_bit() {
    return KrausChannel("classical-bit", {Matrix{{1, 0}, {0, 0}}, Matrix{{0, 0}, {0, 1}}});
}

KrausChannel depolarizing(double p) {
    check_probability(p);
    std::vector<Matrix> k;
    k.push_back(std::sqrt(1.0 - 0.75 * p) * pauli(0));
    for (int a = 1; a < 4; a++) {
        k.push_back(std::sqrt(p / 4.0) * pauli(a));
    }
    return KrausChannel("depolarizing", std::move(k));
}

KrausChannel erasure(double p, std::size_t d) {
    check_probability(p);
    std::vector<Matrix> k;
    Matrix keep(d + 1, d);
    for (std::size_t i = 0; i < d; i++) {
        keep(i, i) = std::sqrt(1.0 - p);
    }
    k.push_back(std::move(keep));
    for (std::size_t i = 0; i < d; i++) {
        Matrix e(d + 1, d);
        e(d, i) = std::sqrt(p);
        k.push_back(std::move(e));
    }
    return KrausChannel("erasure", std::move(k));
}

KrausChannel dephasing(double p) {
    check_probability(p);
    return KrausChannel("dephasing", {std::sqrt(1.0 - p / 2.0) * pauli(0), std::sqrt(p / 2.0) * pauli(3)});
}

}  // namespace retrocap
