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

#ifndef NLQM_GAUGE_HPP
#define NLQM_GAUGE_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "nlqm/dynamics.hpp"
#include "nlqm/field.hpp"
#include "nlqm/functionals.hpp"
#include "nlqm/gauge_schedule.hpp"

namespace nlqm {

/// Nonlinear gauge transformation of the third kind,
///   N_gamma(psi) = psi exp(i gamma ln|psi|),  |psi| = sqrt(rho_eff).
/// Phase-only: |N_gamma psi| = |psi| pointwise.
Wavefunction apply_gauge(const Wavefunction& psi, double gamma, const NodeFloorPolicy& policy);

/// N_gamma^-1 = N_{-gamma}; exact because N_gamma leaves rho untouched.
Wavefunction invert_gauge(const Wavefunction& psi, double gamma, const NodeFloorPolicy& policy);

/// Linear gauge transformation of the second kind, psi -> exp(i theta) psi.
Wavefunction apply_phase_gauge(const Wavefunction& psi, const RealField& theta);

/// An orthogonal projection realized as a diagonal multiplier either in
/// position space or in momentum space.
class ProjectionSpec {
 public:
  static ProjectionSpec identity();
  static ProjectionSpec position(Region region);
  static ProjectionSpec momentum_band(Region band);
  /// Arbitrary diagonal multiplier; rejected by apply_projection unless it is
  /// idempotent (every entry 0 or 1).
  static ProjectionSpec diagonal(Space space, std::vector<double> multiplier);

  Space space() const { return space_; }
  bool is_identity() const { return identity_; }
  /// Multiplier values on `grid` (position or FFT-ordered momentum cells).
  std::vector<double> multiplier(const Grid& grid) const;

 private:
  Space space_ = Space::position;
  bool identity_ = false;
  std::variant<std::monostate, Region, std::vector<double>> data_;
};

Wavefunction apply_projection(const Wavefunction& psi, const ProjectionSpec& projection);

/// E = N_gamma o E_hat o N_gamma^-1.
Wavefunction generalized_projection(const Wavefunction& psi, const ProjectionSpec& projection,
                                    double gamma, const NodeFloorPolicy& policy);

struct IdentityMap {};

struct NonlinearGaugeMap {
  GaugeSchedule schedule;
  NodeFloorPolicy node_floor;
};

struct PhaseGaugeMap {
  RealField theta;
};

/// Explicitly time-dependent automorphism supplied by the caller.
struct CustomMap {
  std::function<Wavefunction(const Wavefunction&, double)> forward;
  std::function<Wavefunction(const Wavefunction&, double)> inverse;
};

/// Homeomorphism N between two wavefunction spaces, possibly depending on
/// time; `t` is absolute time.
using GaugeMap = std::variant<IdentityMap, NonlinearGaugeMap, PhaseGaugeMap, CustomMap>;

Wavefunction map_forward(const GaugeMap& map, const Wavefunction& psi, double t);
Wavefunction map_inverse(const GaugeMap& map, const Wavefunction& psi, double t);

/// A quantum system for equivalence checks: the wavefunction space is the
/// grid's L^2, positional observables are the Born rule, evolutions come
/// from `evolution` (external conditions fixed by its potential).
struct QuantumSystem {
  std::string name;
  EvolutionSpec evolution;
};

struct EquivalenceTolerances {
  double position = 1e-12;
  double evolution = 1e-4;
};

struct EquivalenceReport {
  double max_position_residual = 0.0;
  double max_evolution_residual = 0.0;
  std::size_t sample_count = 0;
  bool pass = false;
};

/// Sampled check of
///   p_B = p_hat_B o N           for every region B,
///   T_t = N^-1 o T_hat_t o N    for every duration t,
/// on every sample state. The evolution residual is the relative L^2
/// distance ||T_t psi - N_t^-1 T_hat_t N_0 psi|| / ||psi||. Verdicts are
/// relative to the samples; this is not a proof of equivalence.
EquivalenceReport check_topological_equivalence(const QuantumSystem& system,
                                                const QuantumSystem& other,
                                                const GaugeMap& map,
                                                const std::vector<Wavefunction>& states,
                                                const std::vector<Region>& regions,
                                                const std::vector<double>& times,
                                                const EquivalenceTolerances& tolerances = {});

}  // namespace nlqm

#endif  // NLQM_GAUGE_HPP
