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

#include "retrocap/linalg.hpp"

#include <array>
#include <cmath>
#include <string>

#include "retrocap/errors.hpp"

namespace retrocap {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw ShapeError("ragged matrix literal");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; k++) {
        m(k, k) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t k = 0; k < entries.size(); k++) {
        m(k, k) = entries[k];
    }
    return m;
}

Matrix Matrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
    Matrix m(ket.size(), bra.size());
    for (std::size_t r = 0; r < ket.size(); r++) {
        for (std::size_t c = 0; c < bra.size(); c++) {
            m(r, c) = ket[r] * std::conj(bra[c]);
        }
    }
    return m;
}

Matrix Matrix::from_columns(const std::vector<CVector> &columns) {
    if (columns.empty()) {
        return {};
    }
    Matrix m(columns.front().size(), columns.size());
    for (std::size_t c = 0; c < columns.size(); c++) {
        if (columns[c].size() != m.rows()) {
            throw ShapeError("columns have different lengths");
        }
        for (std::size_t r = 0; r < m.rows(); r++) {
            m(r, c) = columns[c][r];
        }
    }
    return m;
}

CVector Matrix::column(std::size_t c) const {
    CVector v(rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        v[r] = (*this)(r, c);
    }
    return v;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            m(c, r) = std::conj((*this)(r, c));
        }
    }
    return m;
}

Matrix Matrix::conj() const {
    Matrix m = *this;
    for (auto &x : m.data_) {
        x = std::conj(x);
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            m(c, r) = (*this)(r, c);
        }
    }
    return m;
}

Complex Matrix::trace() const {
    Complex t = 0;
    for (std::size_t k = 0; k < std::min(rows_, cols_); k++) {
        t += (*this)(k, k);
    }
    return t;
}

double Matrix::frobenius_norm() const {
    double s = 0;
    for (const auto &x : data_) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

Matrix &Matrix::operator+=(const Matrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw ShapeError("matrix sum of different shapes");
    }
    for (std::size_t k = 0; k < data_.size(); k++) {
        data_[k] += other.data_[k];
    }
    return *this;
}

Matrix &Matrix::operator-=(const Matrix &other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw ShapeError("matrix difference of different shapes");
    }
    for (std::size_t k = 0; k < data_.size(); k++) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

Matrix &Matrix::operator*=(Complex scale) {
    for (auto &x : data_) {
        x *= scale;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix &b) {
    a += b;
    return a;
}

Matrix operator-(Matrix a, const Matrix &b) {
    a -= b;
    return a;
}

Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols() != b.rows()) {
        throw ShapeError(
            "matrix product " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " * " +
            std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    Matrix m(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            Complex x = a(r, k);
            if (x == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); c++) {
                m(r, c) += x * b(k, c);
            }
        }
    }
    return m;
}

Matrix operator*(Complex s, Matrix m) {
    m *= s;
    return m;
}

CVector operator*(const Matrix &m, std::span<const Complex> v) {
    if (m.cols() != v.size()) {
        throw ShapeError("matrix-vector product shape mismatch");
    }
    CVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); r++) {
        Complex s = 0;
        for (std::size_t c = 0; c < m.cols(); c++) {
            s += m(r, c) * v[c];
        }
        out[r] = s;
    }
    return out;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    if (a.rows() * b.rows() > kMaxTensorDim || a.cols() * b.cols() > kMaxTensorDim) {
        throw SizeError("tensor product exceeds maximum dimension " + std::to_string(kMaxTensorDim));
    }
    Matrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ar++) {
        for (std::size_t ac = 0; ac < a.cols(); ac++) {
            Complex x = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); br++) {
                for (std::size_t bc = 0; bc < b.cols(); bc++) {
                    m(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
                }
            }
        }
    }
    return m;
}

CVector kron(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() * b.size() > kMaxTensorDim) {
        throw SizeError("tensor product exceeds maximum dimension " + std::to_string(kMaxTensorDim));
    }
    CVector out;
    out.reserve(a.size() * b.size());
    for (auto x : a) {
        for (auto y : b) {
            out.push_back(x * y);
        }
    }
    return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw ShapeError("inner product of vectors with different lengths");
    }
    Complex s = 0;
    for (std::size_t k = 0; k < a.size(); k++) {
        s += std::conj(a[k]) * b[k];
    }
    return s;
}

double norm(std::span<const Complex> v) {
    double s = 0;
    for (auto x : v) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

double distance(const Matrix &a, const Matrix &b) {
    return (a - b).frobenius_norm();
}

double hermiticity_defect(const Matrix &m) {
    if (!m.is_square()) {
        throw ShapeError("hermiticity of a non-square matrix");
    }
    return distance(m, m.adjoint());
}

double unitarity_defect(const Matrix &u) {
    if (!u.is_square()) {
        throw ShapeError("unitarity of a non-square matrix");
    }
    return distance(u.adjoint() * u, Matrix::identity(u.rows()));
}

const Matrix &pauli(int index) {
    using namespace std::complex_literals;
    static const std::array<Matrix, 4> table{
        Matrix{{1, 0}, {0, 1}},
        Matrix{{0, 1}, {1, 0}},
        Matrix{{0, -1i}, {1i, 0}},
        Matrix{{1, 0}, {0, -1}},
    };
    if (index < 0 || index > 3) {
        throw DomainError("pauli index must be in 0..3");
    }
    return table[static_cast<std::size_t>(index)];
}

}  // namespace retrocap
