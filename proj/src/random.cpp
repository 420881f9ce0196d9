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

#include "retrocap/random.hpp"

#include <cmath>
#include <numbers>

#include "retrocap/errors.hpp"

namespace retrocap {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), key_(mix64(seed ^ 0x5DEECE66DULL)) {
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {
}

RandomStream RandomStream::derive(std::uint64_t stream_id) const {
    return RandomStream(seed_, mix64(key_ ^ mix64(stream_id + kGolden)));
}

std::uint64_t RandomStream::next_u64() {
    counter_++;
    return mix64(key_ + counter_ * kGolden);
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_int(std::uint64_t n) {
    if (n == 0) {
        throw DomainError("uniform_int range must be positive");
    }
    // Lemire's multiply-shift; bias is below 2^-64 * n.
    auto wide = static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
}

double RandomStream::normal() {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex RandomStream::complex_normal() {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

bool RandomStream::coin() {
    return (next_u64() >> 63) != 0;
}

}  // namespace retrocap
