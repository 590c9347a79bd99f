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

#ifndef NLQM_OBSERVABLES_HPP
#define NLQM_OBSERVABLES_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "nlqm/dynamics.hpp"
#include "nlqm/field.hpp"

namespace nlqm {

// ---------------------------------------------------------------------------
// Asymptotic momentum
// ---------------------------------------------------------------------------

struct ConeRegion {
  Region region;            // position space, clipped to the box
  double clipped_fraction;  // share of the scaled region lying outside the box

  bool clipped() const { return clipped_fraction > 0.0; }
};

/// B_t = {(t/m) p : p in B} for a momentum region B, clipped to the grid box.
/// Momentum boxes are first restricted to the grid's momentum range, so
/// half-lines and "all of momentum space" are valid inputs.
ConeRegion velocity_cone(const Region& momentum_region, double t, double mass, const Grid& grid);

struct AsymptoticMomentumSeries {
  std::vector<double> times;
  std::vector<double> probabilities;
  double estimate = 0.0;        // value at the last time
  bool monotone = false;        // whether the recorded sequence is monotone
  double leak_fraction = 0.0;   // momentum mass whose cone leaves the box at max t
};

/// Maximum momentum mass allowed to travel past the box at the last time.
inline constexpr double kMaxConeLeak = 1e-3;

/// p_{B_t}[free_propagate(psi, t)] for each t. Throws BoxTooSmallError when
/// more than kMaxConeLeak of the momentum mass would wrap around the box.
AsymptoticMomentumSeries asymptotic_momentum_probability(const Wavefunction& psi,
                                                         const Region& momentum_region,
                                                         double mass,
                                                         const std::vector<double>& times);

/// Momentum spectral measure: sum_{k in B} |phi(k)|^2 / sum_k |phi(k)|^2.
double fourier_momentum_probability(const Wavefunction& psi, const Region& momentum_region);

// ---------------------------------------------------------------------------
// Effects, mixtures, density matrices
// ---------------------------------------------------------------------------

/// f(psi) = p_B[T(psi)] with T a finitely presented motion-group element
/// (one evolution for one duration).
struct Effect {
  std::string label;
  EvolutionSpec evolution;
  double duration = 0.0;
  Region region;

  /// Throws BlowupError if the evolution blows up.
  double operator()(const Wavefunction& psi) const;
};

struct MixtureComponent {
  double weight;
  Wavefunction state;
};

class Mixture {
 public:
  /// Weights must lie in (0, 1] and sum to 1 within 1e-12; components must
  /// share one grid and have nonzero norm.
  explicit Mixture(std::vector<MixtureComponent> components);

  const std::vector<MixtureComponent>& components() const { return components_; }
  const Grid& grid() const { return components_.front().state.grid; }

  /// w * this + (1 - w) * other.
  Mixture merged(const Mixture& other, double w) const;

 private:
  std::vector<MixtureComponent> components_;
};

/// f[pi] = sum_j lambda_j f(phi_j).
double effect_on_mixture(const Effect& effect, const Mixture& mixture);

struct Distinguishability {
  bool distinguishable = false;
  std::optional<std::size_t> witness;  // index of the effect with the largest gap
  double gap = 0.0;
  std::vector<double> gaps;            // per effect
  std::size_t family_size = 0;         // verdicts are relative to this family
};

Distinguishability mixtures_distinguishable(const Mixture& first, const Mixture& second,
                                            const std::vector<Effect>& effects, double tol);

/// Largest grid accepted by density_matrix.
inline constexpr std::size_t kMaxDensityMatrixPoints = 512;

/// W_ij = sum_j lambda phi(x_i) conj(phi(x_j)) dV, so tr W = sum lambda ||phi||^2.
struct DensityMatrix {
  Grid grid;
  Eigen::MatrixXcd matrix;

  Complex trace() const { return matrix.trace(); }
  double hermiticity_error() const;
  Eigen::VectorXd eigenvalues() const;
  /// tr(W E(B)) for a position region.
  double position_probability(const Region& region) const;
};

/// Throws CapacityError beyond kMaxDensityMatrixPoints grid points.
DensityMatrix density_matrix(const Mixture& mixture);

// ---------------------------------------------------------------------------
// Two-particle signaling experiment
// ---------------------------------------------------------------------------

/// Two particles on a tensor grid. The potential is kept as the separable
/// pair V(x1, x2) = V1(x1) + V2(x2); `evolution.potential` must stay empty.
struct TwoParticleSpec {
  Grid grid;                   // plane grid; axis 0 is particle 1
  std::vector<double> v1;      // on axis 0 (empty means zero)
  std::vector<double> v2;      // on axis 1 (empty means zero)
  Wavefunction initial;
  EvolutionSpec evolution;     // mass, coefficients, dt, scheme, node floor
};

/// Schmidt coefficients (squared, normalized singular values) in decreasing order.
std::vector<double> schmidt_coefficients(const Wavefunction& psi);
/// Largest Schmidt coefficient below 1 - 1e-8.
bool is_entangled(const Wavefunction& psi);

struct SignalingReport {
  bool entangled = false;
  std::vector<double> baseline;                 // particle-1 probabilities under spec.v2
  std::vector<std::vector<double>> variants;    // per remote potential, per region
  double statistic = 0.0;                       // max |variant - baseline|
  std::optional<BlowupDiagnostic> blowup;
};

/// Evolves the two-particle state under spec.v2 and under each remote
/// potential, then compares the particle-1 marginal probabilities over
/// `marginal_regions` (line regions on axis 0).
SignalingReport gisin_experiment(const TwoParticleSpec& spec,
                                 const std::vector<std::vector<double>>& remote_potentials,
                                 double t, const std::vector<Region>& marginal_regions);

/// Evolves one two-particle configuration and returns the state (or blow-up).
PropagationResult evolve_two_particle(const TwoParticleSpec& spec, const std::vector<double>& v2,
                                      double t, double reference_norm = 0.0);

}  // namespace nlqm

#endif  // NLQM_OBSERVABLES_HPP
