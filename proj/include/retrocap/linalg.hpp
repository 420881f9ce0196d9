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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace retrocap {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Largest dimension any tensor product may reach.
inline constexpr std::size_t kMaxTensorDim = 4096;

/// Dense row-major complex matrix. Only meant for the small operators this library deals
/// with (tens of rows), so every operation is a straightforward loop.
class Matrix {
   public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> entries);
    static Matrix outer(std::span<const Complex> ket, std::span<const Complex> bra);
    /// Matrix whose columns are the given vectors.
    static Matrix from_columns(const std::vector<CVector> &columns);

    std::size_t rows() const {
        return rows_;
    }
    std::size_t cols() const {
        return cols_;
    }
    bool is_square() const {
        return rows_ == cols_;
    }

    Complex &operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }
    std::span<const Complex> data() const {
        return data_;
    }
    std::span<Complex> data() {
        return data_;
    }

    CVector column(std::size_t c) const;

    Matrix adjoint() const;
    Matrix conj() const;
    Matrix transpose() const;
    Complex trace() const;
    double frobenius_norm() const;

    Matrix &operator+=(const Matrix &other);
    Matrix &operator-=(const Matrix &other);
    Matrix &operator*=(Complex scale);

    bool operator==(const Matrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

Matrix operator+(Matrix a, const Matrix &b);
Matrix operator-(Matrix a, const Matrix &b);
Matrix operator*(const Matrix &a, const Matrix &b);
Matrix operator*(Complex s, Matrix m);
CVector operator*(const Matrix &m, std::span<const Complex> v);

/// Kronecker product. Throws SizeError when the result exceeds kMaxTensorDim.
Matrix kron(const Matrix &a, const Matrix &b);
CVector kron(std::span<const Complex> a, std::span<const Complex> b);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm(std::span<const Complex> v);

/// Frobenius distance ||a - b||_F.
double distance(const Matrix &a, const Matrix &b);
double hermiticity_defect(const Matrix &m);
/// ||U^dagger U - I||_F.
double unitarity_defect(const Matrix &u);

/// Pauli matrices, in the order I, X, Y, Z.
const Matrix &pauli(int index);

}  // namespace retrocap
