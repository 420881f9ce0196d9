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
#include <string>
#include <vector>

#include "retrocap/linalg.hpp"
#include "retrocap/states.hpp"

namespace retrocap {

/// Completely positive trace-preserving map in Kraus form.
class KrausChannel {
   public:
    /// Throws ShapeError on inconsistent operator shapes and ValidityError unless
    /// sum K^dagger K = I within 1e-8.
    KrausChannel(std::string label, std::vector<Matrix> kraus);

    const std::string &label() const {
        return label_;
    }
    std::size_t input_dim() const {
        return in_;
    }
    std::size_t output_dim() const {
        return out_;
    }
    const std::vector<Matrix> &kraus() const {
        return kraus_;
    }

    Matrix apply(const Matrix &rho) const;
    DensityOperator apply(const DensityOperator &rho) const;
    /// (N (x) id)(x) for an operator on input (x) ancilla.
    Matrix apply_on_first(const Matrix &joint, std::size_t ancilla_dim) const;

   private:
    std::string label_;
    std::size_t in_ = 0;
    std::size_t out_ = 0;
    std::vector<Matrix> kraus_;
};

// Reference channels used as ladder witnesses.
KrausChannel identity_qudit(std::size_t d);
/// Qubit measured in the computational basis and re-prepared (100% dephasing).
KrausChannel classical_bit();
/// rho -> (1-p) rho + p I/2 on a qubit.
KrausChannel depolarizing(double p);
/// Qubit erased with probability p; output dimension d+1, the last level being the flag.
KrausChannel erasure(double p, std::size_t d = 2);
/// rho -> (1-p/2) rho + (p/2) Z rho Z; p = 1 is complete computational dephasing.
KrausChannel dephasing(double p = 1.0);

}  // namespace retrocap
