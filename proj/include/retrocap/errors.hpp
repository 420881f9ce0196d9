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

#include <stdexcept>
#include <string>

namespace retrocap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A tensor product or register would exceed the configured maximum dimension.
class SizeError : public Error {
   public:
    using Error::Error;
};

/// Operand dimensions are inconsistent with each other.
class ShapeError : public Error {
   public:
    using Error::Error;
};

/// An argument lies outside its mathematical domain (probability outside [0,1], ...).
class DomainError : public Error {
   public:
    using Error::Error;
};

/// A value violates a physical invariant (non-normalized state, negative eigenvalue, ...).
class ValidityError : public Error {
   public:
    using Error::Error;
};

/// An iterative numerical routine failed to converge.
class NumericalError : public Error {
   public:
    using Error::Error;
};

/// The requested representation does not exist for this object (e.g. a Choi matrix of a
/// channel with continuous flag ensembles).
class UnsupportedRepresentation : public Error {
   public:
    using Error::Error;
};

}  // namespace retrocap
