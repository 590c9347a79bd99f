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

#ifndef NLQM_DYNAMICS_HPP
#define NLQM_DYNAMICS_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlqm/coefficients.hpp"
#include "nlqm/errors.hpp"
#include "nlqm/field.hpp"
#include "nlqm/functionals.hpp"
#include "nlqm/gauge_schedule.hpp"

namespace nlqm {

enum class Scheme { strang_split, rk4_full };

/// Maps (gamma, gamma_dot, mass) to the coefficients of the gauge-transformed
/// linear equation. Replaceable so that tests can inject a tampered one.
using CoefficientDictionary = std::function<CoefficientSet(double, double, double)>;

/// Coefficients of N_gamma o (linear Schrodinger) o N_gamma^-1 in the unified
/// family with hbar = 1:
///   nu2 = gamma/4m, mu1 = gamma/2m, mu4 = -gamma/2m,
///   mu2 = -gamma^2/4m, mu5 = gamma^2/8m, alpha1 = -gamma_dot/2, mu0 = 1.
/// Throws DomainError for mass <= 0.
CoefficientSet linearizable_coefficients(double gamma, double gamma_dot, double mass);

/// One element of the motion group: an evolution under fixed external
/// conditions (the potential) for a chosen coefficient set.
///
/// With a gauge schedule attached, the coefficients are taken from
/// `dictionary` at every step midpoint (the linearizable family along
/// gamma_t) and `coefficients` must stay at the linear set.
struct EvolutionSpec {
  double mass = 1.0;
  std::vector<double> potential;  // empty means V = 0
  CoefficientSet coefficients = CoefficientSet::linear();
  std::optional<GaugeSchedule> gauge_schedule;
  CoefficientDictionary dictionary;  // empty means linearizable_coefficients
  double dt = 1e-3;
  Scheme scheme = Scheme::strang_split;
  NodeFloorPolicy node_floor;

  CoefficientSet coefficients_at(double t) const;
  /// True when the evolution is the plain linear Schrodinger flow.
  bool is_linear() const { return !gauge_schedule && coefficients.is_linear(); }
  /// Checks coefficients, potential and dt against `grid`; throws
  /// ConfigurationError or ShapeError.
  void validate(const Grid& grid) const;
};

struct BlowupDiagnostic {
  enum class Trigger { nan, norm_growth, overflow };

  double time_of_detection = 0.0;
  Trigger trigger = Trigger::nan;
  double norm_ratio = 0.0;

  std::string describe() const;
};

/// Thrown only by PropagationResult::value() when a caller insists on a state.
class BlowupError : public Error {
 public:
  explicit BlowupError(BlowupDiagnostic d);
  const BlowupDiagnostic& diagnostic() const { return diagnostic_; }

 private:
  BlowupDiagnostic diagnostic_;
};

class PropagationResult {
 public:
  PropagationResult(Wavefunction psi) : result_(std::move(psi)) {}
  PropagationResult(BlowupDiagnostic d) : result_(d) {}

  bool ok() const { return std::holds_alternative<Wavefunction>(result_); }
  const Wavefunction& state() const { return std::get<Wavefunction>(result_); }
  const BlowupDiagnostic& blowup() const { return std::get<BlowupDiagnostic>(result_); }
  /// The state, or BlowupError.
  const Wavefunction& value() const;

 private:
  std::variant<Wavefunction, BlowupDiagnostic> result_;
};

/// Linear Schrodinger flow by Strang splitting: half potential phase, exact
/// kinetic multiplier exp(-i dt k^2 / 2m), half potential phase. The step
/// count is ceil(t_final / dt) with the step shortened to land on t_final.
Wavefunction propagate_linear(const Wavefunction& psi, const EvolutionSpec& spec, double t_final);

/// Unified-family flow. strang_split: half step of the local right-hand side
/// by RK4, exact kinetic step, half step local. rk4_full: classical RK4 on
/// the whole pseudo-spectral right-hand side. Blow-up (non-finite values,
/// norm growth beyond 10x, |psi| overflow) is returned, not thrown. Growth
/// is measured against `reference_norm` when positive, else against the
/// input norm; segmented runs pass the norm of their first state.
PropagationResult propagate_nonlinear(const Wavefunction& psi, const EvolutionSpec& spec,
                                      double t_final, double reference_norm = 0.0);

/// Dispatches to propagate_linear when the spec is linear.
PropagationResult propagate(const Wavefunction& psi, const EvolutionSpec& spec, double t_final,
                            double reference_norm = 0.0);

/// Free evolution for time t as one exact Fourier multiplier.
Wavefunction free_propagate(const Wavefunction& psi, double mass, double t);

}  // namespace nlqm

#endif  // NLQM_DYNAMICS_HPP
