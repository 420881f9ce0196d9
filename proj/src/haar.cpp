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

#include "retrocap/haar.hpp"

#include <cmath>

#include "retrocap/errors.hpp"

namespace retrocap {

namespace {

Matrix gaussian_qr_q(std::size_t dim, RandomStream &rng) {
    std::vector<CVector> cols(dim, CVector(dim));
    for (auto &col : cols) {
        for (auto &x : col) {
            x = rng.complex_normal();
        }
    }
    for (std::size_t k = 0; k < dim; k++) {
        auto &v = cols[k];
        for (int pass = 0; pass < 2; pass++) {
            for (std::size_t j = 0; j < k; j++) {
                Complex proj = inner(cols[j], v);
                for (std::size_t r = 0; r < dim; r++) {
                    v[r] -= proj * cols[j][r];
                }
            }
        }
        double n = norm(v);
        if (!(n > 1e-300)) {
            throw NumericalError("degenerate Gaussian draw in haar_unitary");
        }
        // Dividing by the (real, positive) norm leaves R with a positive diagonal, which is
        // exactly the phase normalization Q -> Q diag(R_kk / |R_kk|).
        for (auto &x : v) {
            x /= n;
        }
    }
    return Matrix::from_columns(cols);
}

}  // namespace

UnitaryOperator haar_unitary(std::size_t dim, RandomStream &rng) {
    if (dim == 0) {
        throw DomainError("haar_unitary dimension must be positive");
    }
    return UnitaryOperator(gaussian_qr_q(dim, rng));
}

OrthonormalBasis haar_basis(std::size_t dim, RandomStream &rng) {
    return OrthonormalBasis::from_columns(haar_unitary(dim, rng).matrix());
}

StateVector haar_state(std::size_t dim, RandomStream &rng) {
    if (dim == 0) {
        throw DomainError("haar_state dimension must be positive");
    }
    CVector v(dim);
    for (auto &x : v) {
        x = rng.complex_normal();
    }
    return StateVector::normalized(std::move(v));
}

}  // namespace retrocap
