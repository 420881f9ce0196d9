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

#include "retrocap/random.hpp"
#include "retrocap/states.hpp"

namespace retrocap {

/// Haar-distributed unitary: complex Gaussian matrix, Gram-Schmidt (run twice for stability),
/// with the phase of each R diagonal entry absorbed into Q so the law is left-invariant.
UnitaryOperator haar_unitary(std::size_t dim, RandomStream &rng);

/// Columns of a Haar unitary.
OrthonormalBasis haar_basis(std::size_t dim, RandomStream &rng);

/// Uniformly random pure state (normalized complex Gaussian vector). Equal in law to any fixed
/// column of a Haar unitary.
StateVector haar_state(std::size_t dim, RandomStream &rng);

}  // namespace retrocap
