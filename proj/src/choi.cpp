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

#include "retrocap/choi.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "retrocap/eigen.hpp"
#include "retrocap/errors.hpp"

namespace retrocap {

double ChoiMatrix::trace() const {
    double t = 0;
    for (const auto &b : blocks) {
        t += b.trace().real();
    }
    return t;
}

Matrix ChoiMatrix::dense() const {
    if (blocks.size() == 1) {
        return blocks.front();
    }
    const std::size_t nf = blocks.size();
    Matrix out;
    for (std::size_t f = 0; f < nf; f++) {
        Matrix proj(nf, nf);
        proj(f, f) = 1.0;
        Matrix term = kron(blocks[f], proj);
        if (f == 0) {
            out = std::move(term);
        } else {
            out += term;
        }
    }
    return out;
}

namespace {

Matrix choi_block(const KrausChannel &channel, double weight) {
    const std::size_t din = channel.input_dim();
    StateVector phi = StateVector::maximally_entangled(din);
    // (id (x) N) on the second factor: Kraus operators I (x) K.
    Matrix proj = phi.projector();
    Matrix out(din * channel.output_dim(), din * channel.output_dim());
    Matrix id = Matrix::identity(din);
    for (const auto &k : channel.kraus()) {
        Matrix big = kron(id, k);
        out += big * proj * big.adjoint();
    }
    out *= weight;
    return out;
}

}  // namespace

ChoiMatrix choi_matrix(const KrausChannel &channel) {
    return {channel.input_dim(), channel.output_dim(), {choi_block(channel, 1.0)}};
}

ChoiMatrix choi_matrix(const RetroChannelSpec &spec) {
    if (!spec.finite()) {
        throw UnsupportedRepresentation(
            "Choi matrix requested for a Haar flag ensemble; use the Monte Carlo estimators instead");
    }
    spec.validate();
    const std::size_t nb = spec.basis_count();
    const std::size_t nu = spec.unitary_tuple_count();
    const double w = 1.0 / static_cast<double>(nb * nu);
    ChoiMatrix out{spec.c * spec.d, spec.d, {}};
    for (std::size_t b = 0; b < nb; b++) {
        for (std::size_t u = 0; u < nu; u++) {
            out.blocks.push_back(choi_block(flag_channel(spec, finite_flag(spec, b, u)), w));
        }
    }
    return out;
}

std::vector<Matrix> apply_via_choi(const ChoiMatrix &choi, const Matrix &x) {
    const std::size_t din = choi.input_dim;
    const std::size_t dout = choi.output_dim;
    if (x.rows() != din || x.cols() != din) {
        throw ShapeError("apply_via_choi: input operator dimension mismatch");
    }
    std::vector<Matrix> outs;
    for (const auto &block : choi.blocks) {
        Matrix y(dout, dout);
        // y(a, b) = d_in * sum_{i,k} x^T(k, i) J((i, a), (k, b)) = d_in * sum x(i, k) J((i,a),(k,b)).
        for (std::size_t a = 0; a < dout; a++) {
            for (std::size_t b = 0; b < dout; b++) {
                Complex s = 0;
                for (std::size_t i = 0; i < din; i++) {
                    for (std::size_t k = 0; k < din; k++) {
                        s += x(i, k) * block(i * dout + a, k * dout + b);
                    }
                }
                y(a, b) = static_cast<double>(din) * s;
            }
        }
        outs.push_back(std::move(y));
    }
    return outs;
}

PptResult is_ppt(const ChoiMatrix &choi, double tol) {
    std::array<std::size_t, 2> dims{choi.input_dim, choi.output_dim};
    std::array<std::size_t, 1> first{0};
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto &block : choi.blocks) {
        auto ev = eigvals_hermitian(partial_transpose(block, dims, first));
        min_eig = std::min(min_eig, ev.front());
    }
    return {min_eig >= -tol, min_eig};
}

}  // namespace retrocap
