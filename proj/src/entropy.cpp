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

#include "retrocap/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "retrocap/eigen.hpp"
#include "retrocap/errors.hpp"

namespace retrocap {

namespace {

double xlog2x(double x) {
    return x > 0 ? -x * std::log2(x) : 0.0;
}

void check_unit(double x, const char *name) {
    if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) {
        throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
    }
}

}  // namespace

double entropy_of_spectrum(std::span<const double> eigenvalues) {
    double s = 0;
    for (double v : eigenvalues) {
        if (v < -1e-8) {
            throw ValidityError("negative eigenvalue " + std::to_string(v) + " in entropy");
        }
        s += xlog2x(v);
    }
    return std::max(0.0, s);
}

double entropy_bits(const DensityOperator &rho) {
    return entropy_bits(rho.matrix());
}

double entropy_bits(const Matrix &rho) {
    auto ev = eigvals_hermitian(rho);
    return entropy_of_spectrum(ev);
}

double binary_entropy(double x) {
    check_unit(x, "binary_entropy argument");
    x = std::clamp(x, 0.0, 1.0);
    return xlog2x(x) + xlog2x(1.0 - x);
}

std::pair<double, double> mixture_two_pure_eigs(double p, double overlap) {
    check_unit(p, "mixture weight");
    check_unit(overlap, "overlap");
    p = std::clamp(p, 0.0, 1.0);
    overlap = std::clamp(overlap, 0.0, 1.0);
    double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * p * (1.0 - p) * (1.0 - overlap)));
    return {0.5 * (1.0 + disc), 0.5 * (1.0 - disc)};
}

}  // namespace retrocap
