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
#include <span>
#include <vector>

#include "retrocap/linalg.hpp"

namespace retrocap {

/// Default algebraic tolerance for constructor validation.
inline constexpr double kTolerance = 1e-10;

/// Normalized pure state.
class StateVector {
   public:
    /// Throws ValidityError unless the squared norm is 1 within `tol`.
    explicit StateVector(CVector amplitudes, double tol = kTolerance);

    static StateVector basis(std::size_t dim, std::size_t index);
    /// Normalizes first; throws ValidityError on a zero vector.
    static StateVector normalized(CVector amplitudes);
    /// Sum_i |ii> / sqrt(dim).
    static StateVector maximally_entangled(std::size_t dim);

    std::size_t dim() const {
        return amps_.size();
    }
    const CVector &amplitudes() const {
        return amps_;
    }
    Complex operator[](std::size_t k) const {
        return amps_[k];
    }
    Matrix projector() const;

   private:
    CVector amps_;
};

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityOperator {
   public:
    /// Validates Hermiticity, trace and eigenvalues >= -tol. Throws ValidityError.
    explicit DensityOperator(Matrix m, double tol = kTolerance);

    static DensityOperator pure(const StateVector &psi);
    static DensityOperator maximally_mixed(std::size_t dim);

    std::size_t dim() const {
        return m_.rows();
    }
    const Matrix &matrix() const {
        return m_;
    }

   private:
    Matrix m_;
};

class UnitaryOperator {
   public:
    /// Throws ValidityError unless U^dagger U = I within `tol`.
    explicit UnitaryOperator(Matrix m, double tol = kTolerance);

    static UnitaryOperator identity(std::size_t dim);

    std::size_t dim() const {
        return m_.rows();
    }
    const Matrix &matrix() const {
        return m_;
    }
    UnitaryOperator adjoint() const;
    UnitaryOperator conj() const;
    UnitaryOperator transpose() const;

   private:
    Matrix m_;
};

class OrthonormalBasis {
   public:
    /// Throws ValidityError unless <v_j|v_k> = delta_jk within `tol`.
    explicit OrthonormalBasis(std::vector<StateVector> vectors, double tol = kTolerance);

    static OrthonormalBasis computational(std::size_t dim);
    /// The qubit basis {|+>, |->}.
    static OrthonormalBasis hadamard();
    static OrthonormalBasis from_columns(const Matrix &u);

    std::size_t dim() const {
        return vectors_.size();
    }
    const StateVector &operator[](std::size_t j) const {
        return vectors_[j];
    }
    const std::vector<StateVector> &vectors() const {
        return vectors_;
    }
    /// Basis of complex-conjugated vectors {b_j*}.
    OrthonormalBasis conjugate() const;
    /// Matrix with the basis vectors as columns.
    Matrix as_matrix() const;

   private:
    std::vector<StateVector> vectors_;
};

StateVector tensor(const StateVector &a, const StateVector &b);
DensityOperator tensor(const DensityOperator &a, const DensityOperator &b);
UnitaryOperator tensor(const UnitaryOperator &a, const UnitaryOperator &b);

/// Trace out every factor not listed in `keep`. The kept factors appear in ascending order.
/// Throws ShapeError when the product of `dims` differs from the matrix dimension.
Matrix partial_trace(const Matrix &m, std::span<const std::size_t> dims, std::span<const std::size_t> keep);
DensityOperator partial_trace(
    const DensityOperator &rho, std::span<const std::size_t> dims, std::span<const std::size_t> keep);

/// Transpose the listed factors.
Matrix partial_transpose(const Matrix &m, std::span<const std::size_t> dims, std::span<const std::size_t> factors);

/// <Phi|rho|Phi> for the maximally entangled state of two d-dimensional factors.
double entanglement_fidelity(const Matrix &rho_two_factor, std::size_t d);

}  // namespace retrocap
