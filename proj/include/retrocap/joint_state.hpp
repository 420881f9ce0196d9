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
#include <string>
#include <string_view>
#include <vector>

#include "retrocap/random.hpp"
#include "retrocap/states.hpp"

namespace retrocap {

struct Register {
    std::string name;
    std::size_t dim;

    bool operator==(const Register &) const = default;
};

/// Pure state over an ordered list of named tensor factors. The first register is the most
/// significant index of the amplitude vector.
class JointState {
   public:
    /// The trivial state (no registers, amplitude 1).
    JointState();
    JointState(std::string name, const StateVector &psi);
    JointState(std::vector<Register> registers, CVector amplitudes);

    /// Appends the registers of `other` (tensor product on the right).
    void attach(const JointState &other);
    void attach(std::string name, const StateVector &psi);
    /// Appends two registers in a joint state on dims (da, db).
    void attach_pair(std::string a, std::string b, const StateVector &psi, std::size_t da, std::size_t db);

    const std::vector<Register> &registers() const {
        return regs_;
    }
    bool has(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;
    std::size_t dim_of(std::string_view name) const;
    std::size_t dim() const {
        return amps_.size();
    }
    const CVector &amplitudes() const {
        return amps_;
    }

    /// Applies `op` to one register. `op` should be unitary; the norm is not re-checked.
    void apply(std::string_view name, const Matrix &op);
    void rename(std::string_view from, std::string to);
    /// Reorders registers; `order` lists every register name exactly once.
    void permute(const std::vector<std::string> &order);
    /// Fuses two registers into one named `merged` of dimension da*db (a most significant).
    void merge(std::string_view a, std::string_view b, std::string merged);

    /// Reduced density matrix on `keep` (in the listed order).
    Matrix reduced(const std::vector<std::string> &keep) const;

    /// Contracts register `name` with <v|, removing it. Returns the squared norm of the result
    /// without renormalizing.
    double project_out(std::string_view name, std::span<const Complex> v);
    void renormalize();

   private:
    struct Split {
        std::size_t left, dim, right;
    };
    Split split(std::size_t index) const;

    std::vector<Register> regs_;
    CVector amps_;
};

struct Measurement {
    std::size_t outcome;
    double probability;
    JointState post;
};

/// Measures register `name` in `basis`, sampling the outcome with Born probabilities. The
/// measured register is removed from the post-measurement state, which is renormalized.
/// Consumes exactly one uniform draw. Throws ShapeError on a dimension mismatch and
/// ValidityError when the outcome probabilities do not sum to 1 within 1e-8.
Measurement born_measure(const JointState &state, std::string_view name, const OrthonormalBasis &basis, RandomStream &rng);

/// Like born_measure, but the register stays in place, collapsed to the observed basis vector.
Measurement born_collapse(const JointState &state, std::string_view name, const OrthonormalBasis &basis, RandomStream &rng);

struct DensityMeasurement {
    std::size_t outcome;
    double probability;
    /// State of the remaining factors.
    DensityOperator post;
    std::vector<std::size_t> dims;
};

/// Density-operator form of born_measure: measures factor `subsystem` of a state on `dims`.
DensityMeasurement born_measure(
    const DensityOperator &rho,
    std::span<const std::size_t> dims,
    std::size_t subsystem,
    const OrthonormalBasis &basis,
    RandomStream &rng);

}  // namespace retrocap
