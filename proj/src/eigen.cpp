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

#include "retrocap/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "retrocap/errors.hpp"

namespace retrocap {

namespace {

constexpr double kHermitianTolerance = 1e-8;
constexpr double kOffDiagonalTarget = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix &a) {
    double s = 0;
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t c = 0; c < a.cols(); c++) {
            if (r != c) {
                s += std::norm(a(r, c));
            }
        }
    }
    return std::sqrt(s);
}

EigenDecomposition jacobi(const Matrix &h, bool want_vectors) {
    if (!h.is_square()) {
        throw ShapeError("eigendecomposition of a non-square matrix");
    }
    double scale = std::max(1.0, h.frobenius_norm());
    if (hermiticity_defect(h) > kHermitianTolerance * scale) {
        throw DomainError("eig_hermitian: matrix is not Hermitian within 1e-8");
    }
    const std::size_t n = h.rows();

    // Work on the exactly-Hermitian part.
    Matrix a(n, n);
    for (std::size_t r = 0; r < n; r++) {
        a(r, r) = h(r, r).real();
        for (std::size_t c = r + 1; c < n; c++) {
            Complex x = 0.5 * (h(r, c) + std::conj(h(c, r)));
            a(r, c) = x;
            a(c, r) = std::conj(x);
        }
    }
    Matrix v = want_vectors ? Matrix::identity(n) : Matrix{};

    const double target = kOffDiagonalTarget * scale;
    int sweep = 0;
    while (off_diagonal_norm(a) >= target) {
        if (sweep++ >= kMaxSweeps) {
            throw NumericalError("eig_hermitian: no convergence after 100 sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                Complex apq = a(p, q);
                double mag = std::abs(apq);
                if (mag == 0.0) {
                    continue;
                }
                // Phase-rotate q so the (p, q) entry becomes real, then apply a real rotation.
                Complex phase = std::conj(apq) / mag;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = (aqq - app) / (2.0 * mag);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                double cs = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * cs;

                // G restricted to (p, q): [[c, s], [-s e, c e]] with e = phase.
                const Complex gpp = cs;
                const Complex gpq = sn;
                const Complex gqp = -sn * phase;
                const Complex gqq = cs * phase;

                for (std::size_t k = 0; k < n; k++) {
                    Complex akp = a(k, p);
                    Complex akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                }
                for (std::size_t k = 0; k < n; k++) {
                    Complex apk = a(p, k);
                    Complex aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                if (want_vectors) {
                    for (std::size_t k = 0; k < n; k++) {
                        Complex vkp = v(k, p);
                        Complex vkq = v(k, q);
                        v(k, p) = vkp * gpp + vkq * gqp;
                        v(k, q) = vkp * gpq + vkq * gqq;
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });

    EigenDecomposition out;
    out.values.reserve(n);
    for (auto k : order) {
        out.values.push_back(a(k, k).real());
    }
    if (want_vectors) {
        out.vectors = Matrix(n, n);
        for (std::size_t c = 0; c < n; c++) {
            for (std::size_t r = 0; r < n; r++) {
                out.vectors(r, c) = v(r, order[c]);
            }
        }
    }
    return out;
}

}  // namespace

EigenDecomposition eig_hermitian(const Matrix &h) {
    return jacobi(h, true);
}

std::vector<double> eigvals_hermitian(const Matrix &h) {
    return jacobi(h, false).values;
}

}  // namespace retrocap
