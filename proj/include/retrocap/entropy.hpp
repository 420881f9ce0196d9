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

#include <span>
#include <utility>

#include "retrocap/linalg.hpp"
#include "retrocap/states.hpp"

namespace retrocap {

/// -sum lambda log2 lambda over a spectrum. Eigenvalues in [-1e-8, 0) are treated as zero;
/// anything more negative throws ValidityError.
double entropy_of_spectrum(std::span<const double> eigenvalues);

/// Von Neumann entropy in bits.
double entropy_bits(const DensityOperator &rho);
/// Same, for a raw Hermitian PSD matrix (skips DensityOperator validation; used in hot loops).
double entropy_bits(const Matrix &rho);

/// h2(x) = -x log2 x - (1-x) log2(1-x). Throws DomainError outside [0,1] beyond 1e-12.
double binary_entropy(double x);

/// Eigenvalues (larger, smaller) of p|psi><psi| + (1-p)|chi><chi| with |<psi|chi>|^2 = overlap.
std::pair<double, double> mixture_two_pure_eigs(double p, double overlap);

}  // namespace retrocap
