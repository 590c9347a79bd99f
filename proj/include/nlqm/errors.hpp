// Copyright 2026 The nlqm Authors
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

#ifndef NLQM_ERRORS_HPP
#define NLQM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlqm {

// Base of every error raised by the library. Blow-up during nonlinear
// propagation is not an error; it is returned as a BlowupDiagnostic.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values in a wavefunction or field.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// Zero-norm state passed where a normalizable state is required.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

// Operands live on different grids or have mismatched sizes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class InvalidProjectionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// Raised when an asymptotic measurement would be corrupted by mass
// wrapping around the periodic box.
class BoxTooSmallError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlqm

#endif  // NLQM_ERRORS_HPP
