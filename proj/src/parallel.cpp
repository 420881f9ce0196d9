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

#include "retrocap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "retrocap/errors.hpp"

namespace retrocap {

void RunningStats::add(double x) {
    count++;
    double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void RunningStats::merge(const RunningStats &other) {
    if (other.count == 0) {
        return;
    }
    if (count == 0) {
        *this = other;
        return;
    }
    double na = static_cast<double>(count);
    double nb = static_cast<double>(other.count);
    double delta = other.mean - mean;
    double n = na + nb;
    mean += delta * nb / n;
    m2 += other.m2 + delta * delta * na * nb / n;
    count += other.count;
}

double RunningStats::variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)> &f) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t k = 0; k < n; k++) {
            f(k);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; w++) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < n; k += workers) {
                    f(k);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

namespace {

Estimate combine(std::string quantity, const std::vector<RunningStats> &batches, std::uint64_t seed) {
    RunningStats total;
    Estimate e;
    e.quantity = std::move(quantity);
    for (const auto &b : batches) {
        total.merge(b);
        e.batch_means.push_back(b.mean);
    }
    e.mean = total.mean;
    e.std_error = std::sqrt(total.variance() / static_cast<double>(total.count));
    e.samples = total.count;
    e.seed = seed;
    return e;
}

}  // namespace

Estimate run_monte_carlo(
    std::string quantity,
    std::uint64_t samples,
    std::uint64_t seed,
    unsigned workers,
    const std::function<double(RandomStream &)> &draw,
    std::uint64_t batch_size) {
    if (samples == 0 || batch_size == 0) {
        throw DomainError("Monte Carlo needs a positive sample count and batch size");
    }
    const std::uint64_t n_batches = (samples + batch_size - 1) / batch_size;
    std::vector<RunningStats> batches(n_batches);
    RandomStream root(seed);
    parallel_for(n_batches, workers, [&](std::size_t k) {
        RandomStream rng = root.derive(k);
        std::uint64_t begin = k * batch_size;
        std::uint64_t end = std::min(samples, begin + batch_size);
        RunningStats s;
        for (std::uint64_t i = begin; i < end; i++) {
            s.add(draw(rng));
        }
        batches[k] = s;
    });
    return combine(std::move(quantity), batches, seed);
}

Estimate estimate_from_samples(
    std::string quantity, const std::vector<double> &values, std::uint64_t seed, std::uint64_t batch_size) {
    if (values.empty() || batch_size == 0) {
        throw DomainError("estimate needs at least one sample and a positive batch size");
    }
    std::vector<RunningStats> batches((values.size() + batch_size - 1) / batch_size);
    for (std::size_t i = 0; i < values.size(); i++) {
        batches[i / batch_size].add(values[i]);
    }
    return combine(std::move(quantity), batches, seed);
}

}  // namespace retrocap
