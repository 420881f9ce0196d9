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

#include <cstdint>

#include "retrocap/linalg.hpp"

namespace retrocap {

/// Counter-based deterministic random stream.
///
/// Draw k of a stream is a pure function of (key, k): the key is derived from the seed and the
/// chain of stream ids used to reach this stream, and each draw hashes key + k * golden ratio
/// through the SplitMix64 finalizer. Nothing depends on the host's <random> implementation, so
/// sequences are identical across platforms, and derived sub-streams make parallel batches
/// independent of scheduling.
class RandomStream {
   public:
    explicit RandomStream(std::uint64_t seed);

    /// Independent sub-stream identified by `stream_id`. Does not advance this stream.
    RandomStream derive(std::uint64_t stream_id) const;

    std::uint64_t seed() const {
        return seed_;
    }
    std::uint64_t counter() const {
        return counter_;
    }

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n);
    /// Standard normal (Box-Muller, one value per call).
    double normal();
    /// Circularly-symmetric complex normal with E|z|^2 = 1.
    Complex complex_normal();
    bool coin();

   private:
    RandomStream(std::uint64_t seed, std::uint64_t key);

    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace retrocap
