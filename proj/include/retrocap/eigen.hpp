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

#include <vector>

#include "retrocap/linalg.hpp"

namespace retrocap {

struct EigenDecomposition {
    /// Ascending.
    std::vector<double> values;
    /// Column k is the eigenvector of values[k].
    Matrix vectors;
};

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Sweeps over all (p, q) pairs, zeroing each off-diagonal entry with a phase-adjusted Givens
/// rotation, until the off-diagonal Frobenius norm drops below 1e-12 (scaled by the matrix norm
/// when that exceeds 1). Throws DomainError when the input is not Hermitian within 1e-8 and
/// NumericalError after 100 sweeps without convergence.
EigenDecomposition eig_hermitian(const Matrix &h);

/// Same iteration without accumulating eigenvectors.
std::vector<double> eigvals_hermitian(const Matrix &h);

}  // namespace retrocap
