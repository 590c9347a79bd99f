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

#ifndef NLQM_COEFFICIENTS_HPP
#define NLQM_COEFFICIENTS_HPP

#include <array>
#include <string_view>

namespace nlqm {

/// Real couplings of the unified nonlinear Schrodinger family
///
///   i d/dt psi = -(1/2m) Laplacian psi
///                + i (nu1 R1 + nu2 R2) psi + mu0 V psi
///                + (mu1 R1 + ... + mu5 R5) psi + alpha1 ln|psi|^2 psi.
///
/// The kinetic term is always present and is not a coefficient here; the
/// all-zero set with mu0 = 1 is the linear Schrodinger equation.
struct CoefficientSet {
  double nu1 = 0.0;
  double nu2 = 0.0;
  double mu0 = 1.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double mu4 = 0.0;
  double mu5 = 0.0;
  double alpha1 = 0.0;

  static constexpr std::size_t count = 9;
  static constexpr std::array<std::string_view, count> names = {
      "nu1", "nu2", "mu0", "mu1", "mu2", "mu3", "mu4", "mu5", "alpha1"};

  static CoefficientSet linear() { return {}; }
  static CoefficientSet zero() {
    CoefficientSet c;
    c.mu0 = 0.0;
    return c;
  }

  double& operator[](std::size_t i);
  double operator[](std::size_t i) const;
  /// Index of a coefficient name; throws ConfigurationError if unknown.
  static std::size_t index_of(std::string_view name);

  bool has_nonlinear_terms() const;
  bool is_linear() const { return !has_nonlinear_terms() && mu0 == 1.0; }
  bool all_finite() const;

  bool operator==(const CoefficientSet&) const = default;
};

}  // namespace nlqm

#endif  // NLQM_COEFFICIENTS_HPP
