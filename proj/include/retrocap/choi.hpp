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
#include <vector>

#include "retrocap/channels.hpp"
#include "retrocap/kraus.hpp"

namespace retrocap {

/// Normalized Choi state J = (id (x) N)(|Phi><Phi|), Phi = sum_i |ii>/sqrt(d_in), ordered
/// input (x) output.
///
/// Channels whose output carries a classical flag register are stored block-diagonally:
/// blocks[f] is the (already weighted) Choi block of flag value f, and the full matrix is
/// sum_f blocks[f] (x) |f><f|.
struct ChoiMatrix {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    std::vector<Matrix> blocks;

    std::size_t flag_count() const {
        return blocks.size();
    }
    double trace() const;
    /// Full matrix on input (x) output (x) flag (the flag factor is omitted when there is one block).
    Matrix dense() const;
};

ChoiMatrix choi_matrix(const KrausChannel &channel);
/// Throws UnsupportedRepresentation for Haar ensembles.
ChoiMatrix choi_matrix(const RetroChannelSpec &spec);

/// Channel action recovered from the Choi state: N(x) = d_in tr_in[(x^T (x) I) J], block by block.
std::vector<Matrix> apply_via_choi(const ChoiMatrix &choi, const Matrix &x);

struct PptResult {
    bool ppt;
    /// Smallest eigenvalue of the partial transpose over the input factor.
    double min_eigenvalue;
};

PptResult is_ppt(const ChoiMatrix &choi, double tol = 1e-10);

}  // namespace retrocap
