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
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "retrocap/random.hpp"

namespace retrocap {

/// Welford accumulator; merge() uses Chan's pairwise update.
struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0;
    double m2 = 0;

    void add(double x);
    void merge(const RunningStats &other);
    /// Unbiased sample variance (0 for fewer than two samples).
    double variance() const;
};

/// Monte Carlo result.
struct Estimate {
    std::string quantity;
    double mean = 0;
    /// Sample standard deviation / sqrt(samples).
    double std_error = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    /// Mean of each consecutive batch, in batch order (convergence trace).
    std::vector<double> batch_means;
};

/// Runs `f(index)` for index in [0, n) on up to `workers` threads. Work is statically
/// partitioned; callers must write results into per-index slots.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)> &f);

/// Draws `samples` values, batch k (of `batch_size` draws) from RandomStream(seed).derive(k),
/// and combines batches in order, so the result is bit-identical for any worker count.
Estimate run_monte_carlo(
    std::string quantity,
    std::uint64_t samples,
    std::uint64_t seed,
    unsigned workers,
    const std::function<double(RandomStream &)> &draw,
    std::uint64_t batch_size = 10000);

/// Estimate from precomputed per-sample values, batched exactly like run_monte_carlo.
Estimate estimate_from_samples(
    std::string quantity, const std::vector<double> &values, std::uint64_t seed, std::uint64_t batch_size = 10000);

}  // namespace retrocap
