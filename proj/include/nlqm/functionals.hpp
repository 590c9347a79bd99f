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

#ifndef NLQM_FUNCTIONALS_HPP
#define NLQM_FUNCTIONALS_HPP

#include <span>
#include <vector>

#include "nlqm/coefficients.hpp"
#include "nlqm/field.hpp"

namespace nlqm {

enum class FunctionalId { R1, R2, R3, R4, R5, LOG };

/// Relative density floor used wherever rho appears in a denominator or a
/// logarithm: rho_eff = max(rho, epsilon_rel * max(rho)).
struct NodeFloorPolicy {
  double epsilon_rel = 1e-12;

  void validate() const;
  bool operator==(const NodeFloorPolicy&) const = default;
};

std::vector<double> effective_density(std::span<const double> rho, const NodeFloorPolicy& policy);

/// All functionals of one state, evaluated from a single set of spectral
/// derivatives:
///   R1 = div J / rho, R2 = Lap rho / rho, R3 = J.J / rho^2,
///   R4 = J.grad rho / rho^2, R5 = grad rho.grad rho / rho^2, LOG = ln rho,
/// with rho_eff in every denominator and in the logarithm.
struct FunctionalFields {
  Grid grid;
  std::vector<double> r1, r2, r3, r4, r5, log;
};

FunctionalFields evaluate_all(const Wavefunction& psi, const NodeFloorPolicy& policy);
RealField evaluate(FunctionalId id, const Wavefunction& psi, const NodeFloorPolicy& policy);

/// Local (non-kinetic) part of the right-hand side of i d/dt psi:
///   [ i (nu1 R1 + nu2 R2) + mu0 V + sum_k mu_k R_k + alpha1 LOG ] psi.
/// An empty `potential` means V = 0.
std::vector<Complex> nonlinear_rhs(const Wavefunction& psi, const CoefficientSet& coeffs,
                                   std::span<const double> potential,
                                   const NodeFloorPolicy& policy);

}  // namespace nlqm

#endif  // NLQM_FUNCTIONALS_HPP
