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

#include "retrocap/states.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "retrocap/eigen.hpp"
#include "retrocap/errors.hpp"

namespace retrocap {

StateVector::StateVector(CVector amplitudes, double tol) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) {
        throw ValidityError("state vector must have positive dimension");
    }
    double n2 = 0;
    for (auto x : amps_) {
        n2 += std::norm(x);
    }
    if (std::abs(n2 - 1.0) > tol) {
        throw ValidityError("state vector squared norm " + std::to_string(n2) + " differs from 1");
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw ShapeError("basis index out of range");
    }
    CVector v(dim);
    v[index] = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::normalized(CVector amplitudes) {
    double n = norm(amplitudes);
    if (!(n > 0)) {
        throw ValidityError("cannot normalize a zero vector");
    }
    for (auto &x : amplitudes) {
        x /= n;
    }
    return StateVector(std::move(amplitudes));
}

StateVector StateVector::maximally_entangled(std::size_t dim) {
    if (dim * dim > kMaxTensorDim) {
        throw SizeError("maximally entangled state exceeds maximum dimension");
    }
    CVector v(dim * dim);
    double a = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t i = 0; i < dim; i++) {
        v[i * dim + i] = a;
    }
    return StateVector(std::move(v));
}

Matrix StateVector::projector() const {
    return Matrix::outer(amps_, amps_);
}

DensityOperator::DensityOperator(Matrix m, double tol) : m_(std::move(m)) {
    if (!m_.is_square() || m_.rows() == 0) {
        throw ValidityError("density operator must be a non-empty square matrix");
    }
    if (hermiticity_defect(m_) > tol) {
        throw ValidityError("density operator is not Hermitian");
    }
    if (std::abs(m_.trace() - Complex{1.0}) > tol) {
        throw ValidityError("density operator trace differs from 1");
    }
    auto ev = eigvals_hermitian(m_);
    if (ev.front() < -tol) {
        throw ValidityError("density operator has eigenvalue " + std::to_string(ev.front()));
    }
}

DensityOperator DensityOperator::pure(const StateVector &psi) {
    return DensityOperator(psi.projector());
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    Matrix m = Matrix::identity(dim);
    m *= 1.0 / static_cast<double>(dim);
    return DensityOperator(std::move(m));
}

UnitaryOperator::UnitaryOperator(Matrix m, double tol) : m_(std::move(m)) {
    if (!m_.is_square() || m_.rows() == 0) {
        throw ValidityError("unitary must be a non-empty square matrix");
    }
    if (unitarity_defect(m_) > tol) {
        throw ValidityError("matrix is not unitary within tolerance");
    }
}

UnitaryOperator UnitaryOperator::identity(std::size_t dim) {
    return UnitaryOperator(Matrix::identity(dim));
}

UnitaryOperator UnitaryOperator::adjoint() const {
    return UnitaryOperator(m_.adjoint());
}

UnitaryOperator UnitaryOperator::conj() const {
    return UnitaryOperator(m_.conj());
}

UnitaryOperator UnitaryOperator::transpose() const {
    return UnitaryOperator(m_.transpose());
}

OrthonormalBasis::OrthonormalBasis(std::vector<StateVector> vectors, double tol) : vectors_(std::move(vectors)) {
    if (vectors_.empty()) {
        throw ValidityError("basis must be non-empty");
    }
    const std::size_t n = vectors_.size();
    for (const auto &v : vectors_) {
        if (v.dim() != n) {
            throw ValidityError("basis size differs from vector dimension");
        }
    }
    for (std::size_t j = 0; j < n; j++) {
        for (std::size_t k = j + 1; k < n; k++) {
            if (std::abs(inner(vectors_[j].amplitudes(), vectors_[k].amplitudes())) > tol) {
                throw ValidityError("basis vectors are not orthogonal");
            }
        }
    }
}

OrthonormalBasis OrthonormalBasis::computational(std::size_t dim) {
    std::vector<StateVector> v;
    for (std::size_t k = 0; k < dim; k++) {
        v.push_back(StateVector::basis(dim, k));
    }
    return OrthonormalBasis(std::move(v));
}

OrthonormalBasis OrthonormalBasis::hadamard() {
    double a = 1.0 / std::sqrt(2.0);
    return OrthonormalBasis({StateVector({a, a}), StateVector({a, -a})});
}

OrthonormalBasis OrthonormalBasis::from_columns(const Matrix &u) {
    if (!u.is_square()) {
        throw ShapeError("basis matrix must be square");
    }
    std::vector<StateVector> v;
    for (std::size_t c = 0; c < u.cols(); c++) {
        v.emplace_back(u.column(c));
    }
    return OrthonormalBasis(std::move(v));
}

OrthonormalBasis OrthonormalBasis::conjugate() const {
    std::vector<StateVector> v;
    for (const auto &b : vectors_) {
        CVector a = b.amplitudes();
        for (auto &x : a) {
            x = std::conj(x);
        }
        v.emplace_back(std::move(a));
    }
    return OrthonormalBasis(std::move(v));
}

Matrix OrthonormalBasis::as_matrix() const {
    std::vector<CVector> cols;
    for (const auto &b : vectors_) {
        cols.push_back(b.amplitudes());
    }
    return Matrix::from_columns(cols);
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    return StateVector(kron(a.amplitudes(), b.amplitudes()));
}

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
    return DensityOperator(kron(a.matrix(), b.matrix()));
}

UnitaryOperator tensor(const UnitaryOperator &a, const UnitaryOperator &b) {
    return UnitaryOperator(kron(a.matrix(), b.matrix()));
}

namespace {

std::size_t product(std::span<const std::size_t> dims) {
    std::size_t p = 1;
    for (auto d : dims) {
        if (d == 0) {
            throw ShapeError("factor dimensions must be positive");
        }
        p *= d;
    }
    return p;
}

std::vector<bool> factor_mask(std::span<const std::size_t> dims, std::span<const std::size_t> factors) {
    std::vector<bool> mask(dims.size(), false);
    for (auto f : factors) {
        if (f >= dims.size()) {
            throw ShapeError("factor index " + std::to_string(f) + " out of range");
        }
        if (mask[f]) {
            throw ShapeError("factor index listed twice");
        }
        mask[f] = true;
    }
    return mask;
}

/// Splits a flat index into per-factor digits (most significant factor first).
void to_digits(std::size_t index, std::span<const std::size_t> dims, std::vector<std::size_t> &digits) {
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
}

}  // namespace

Matrix partial_trace(const Matrix &m, std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
    if (!m.is_square() || product(dims) != m.rows()) {
        throw ShapeError("partial_trace: product of factor dimensions does not match matrix dimension");
    }
    auto mask = factor_mask(dims, keep);
    std::size_t kept_dim = 1;
    for (std::size_t k = 0; k < dims.size(); k++) {
        if (mask[k]) {
            kept_dim *= dims[k];
        }
    }
    Matrix out(kept_dim, kept_dim);
    std::vector<std::size_t> rd(dims.size()), cd(dims.size());
    const std::size_t n = m.rows();
    for (std::size_t r = 0; r < n; r++) {
        to_digits(r, dims, rd);
        for (std::size_t c = 0; c < n; c++) {
            to_digits(c, dims, cd);
            bool diagonal_in_traced = true;
            std::size_t kr = 0, kc = 0;
            for (std::size_t k = 0; k < dims.size(); k++) {
                if (mask[k]) {
                    kr = kr * dims[k] + rd[k];
                    kc = kc * dims[k] + cd[k];
                } else if (rd[k] != cd[k]) {
                    diagonal_in_traced = false;
                    break;
                }
            }
            if (diagonal_in_traced) {
                out(kr, kc) += m(r, c);
            }
        }
    }
    return out;
}

DensityOperator partial_trace(
    const DensityOperator &rho, std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
    return DensityOperator(partial_trace(rho.matrix(), dims, keep));
}

Matrix partial_transpose(const Matrix &m, std::span<const std::size_t> dims, std::span<const std::size_t> factors) {
    if (!m.is_square() || product(dims) != m.rows()) {
        throw ShapeError("partial_transpose: product of factor dimensions does not match matrix dimension");
    }
    auto mask = factor_mask(dims, factors);
    const std::size_t n = m.rows();
    Matrix out(n, n);
    std::vector<std::size_t> rd(dims.size()), cd(dims.size());
    for (std::size_t r = 0; r < n; r++) {
        to_digits(r, dims, rd);
        for (std::size_t c = 0; c < n; c++) {
            to_digits(c, dims, cd);
            std::size_t nr = 0, nc = 0;
            for (std::size_t k = 0; k < dims.size(); k++) {
                std::size_t a = mask[k] ? cd[k] : rd[k];
                std::size_t b = mask[k] ? rd[k] : cd[k];
                nr = nr * dims[k] + a;
                nc = nc * dims[k] + b;
            }
            out(nr, nc) = m(r, c);
        }
    }
    return out;
}

double entanglement_fidelity(const Matrix &rho_two_factor, std::size_t d) {
    if (rho_two_factor.rows() != d * d || !rho_two_factor.is_square()) {
        throw ShapeError("entanglement_fidelity expects a d^2 x d^2 matrix");
    }
    Complex s = 0;
    for (std::size_t i = 0; i < d; i++) {
        for (std::size_t j = 0; j < d; j++) {
            s += rho_two_factor(i * d + i, j * d + j);
        }
    }
    return s.real() / static_cast<double>(d);
}

}  // namespace retrocap
