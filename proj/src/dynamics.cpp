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

#include "nlqm/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nlqm/field_core.hpp"
#include "nlqm/spectral.hpp"

namespace nlqm {

namespace {

constexpr double kNormGrowthLimit = 10.0;
constexpr double kOverflowLimit = 1e150;

std::size_t step_count(double t_final, double dt) {
  const double n = std::ceil(t_final / dt - 1e-9);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

std::vector<Complex> kinetic_multiplier(const Spectral& spec, double mass, double t) {
  const auto& k2 = spec.k_squared();
  std::vector<Complex> m(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) {
    const double phase = -t * k2[i] / (2.0 * mass);
    m[i] = Complex{std::cos(phase), std::sin(phase)};
  }
  return m;
}

void apply_multiplier(const Spectral& spec, std::vector<Complex>& values,
                      const std::vector<Complex>& multiplier) {
  spec.forward(values, values);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= multiplier[i];
  spec.backward(values, values);
}

// exp(-i mu0 V h) as a pointwise phase; empty when V = 0.
std::vector<Complex> potential_phase(const std::vector<double>& potential, double mu0, double h) {
  std::vector<Complex> p(potential.size());
  for (std::size_t i = 0; i < potential.size(); ++i) {
    const double phase = -h * mu0 * potential[i];
    p[i] = Complex{std::cos(phase), std::sin(phase)};
  }
  return p;
}

void apply_phase(std::vector<Complex>& values, const std::vector<Complex>& phase) {
  for (std::size_t i = 0; i < phase.size(); ++i) values[i] *= phase[i];
}

double sum_sq(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

std::optional<BlowupDiagnostic> detect_blowup(const std::vector<Complex>& values, double sum0,
                                              double t) {
  double s = 0.0;
  double peak = 0.0;
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      return BlowupDiagnostic{t, BlowupDiagnostic::Trigger::nan, std::nan("")};
    }
    const double a = std::norm(v);
    s += a;
    peak = std::max(peak, a);
  }
  const double ratio = std::sqrt(s / sum0);
  if (std::sqrt(peak) > kOverflowLimit) {
    return BlowupDiagnostic{t, BlowupDiagnostic::Trigger::overflow, ratio};
  }
  if (ratio > kNormGrowthLimit) {
    return BlowupDiagnostic{t, BlowupDiagnostic::Trigger::norm_growth, ratio};
  }
  return std::nullopt;
}

// d/dt psi = -i F[psi] psi for the local part.
void local_derivative(const Wavefunction& psi, const CoefficientSet& c, const EvolutionSpec& spec,
                      std::vector<Complex>& out) {
  out = nonlinear_rhs(psi, c, spec.potential, spec.node_floor);
  for (auto& v : out) v *= Complex{0.0, -1.0};
}

void rk4_local(Wavefunction& psi, double h, const CoefficientSet& c, const EvolutionSpec& spec) {
  const std::size_t n = psi.values.size();
  std::vector<Complex> k1, k2, k3, k4;
  Wavefunction stage = psi;
  local_derivative(psi, c, spec, k1);
  for (std::size_t i = 0; i < n; ++i) stage.values[i] = psi.values[i] + 0.5 * h * k1[i];
  local_derivative(stage, c, spec, k2);
  for (std::size_t i = 0; i < n; ++i) stage.values[i] = psi.values[i] + 0.5 * h * k2[i];
  local_derivative(stage, c, spec, k3);
  for (std::size_t i = 0; i < n; ++i) stage.values[i] = psi.values[i] + h * k3[i];
  local_derivative(stage, c, spec, k4);
  for (std::size_t i = 0; i < n; ++i) {
    psi.values[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

// d/dt psi = -i (K psi + F[psi] psi) for the full pseudo-spectral scheme.
void full_derivative(const Wavefunction& psi, const CoefficientSet& c, const EvolutionSpec& spec,
                     const Spectral& sp, std::vector<Complex>& out) {
  out = nonlinear_rhs(psi, c, spec.potential, spec.node_floor);
  std::vector<Complex> kin(psi.values.size());
  sp.forward(psi.values, kin);
  const auto& k2 = sp.k_squared();
  for (std::size_t i = 0; i < kin.size(); ++i) kin[i] *= k2[i] / (2.0 * spec.mass);
  sp.backward(kin, kin);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Complex{0.0, -1.0} * (out[i] + kin[i]);
}

void rk4_full_step(Wavefunction& psi, double t, double h, const EvolutionSpec& spec,
                   const Spectral& sp) {
  const std::size_t n = psi.values.size();
  const auto c0 = spec.coefficients_at(t);
  const auto ch = spec.coefficients_at(t + 0.5 * h);
  const auto c1 = spec.coefficients_at(t + h);
  std::vector<Complex> k1, k2, k3, k4;
  Wavefunction stage = psi;
  full_derivative(psi, c0, spec, sp, k1);
  for (std::size_t i = 0; i < n; ++i) stage.values[i] = psi.values[i] + 0.5 * h * k1[i];
  full_derivative(stage, ch, spec, sp, k2);
  for (std::size_t i = 0; i < n; ++i) stage.values[i] = psi.values[i] + 0.5 * h * k2[i];
  full_derivative(stage, ch, spec, sp, k3);
  for (std::size_t i = 0; i < n; ++i) stage.values[i] = psi.values[i] + h * k3[i];
  full_derivative(stage, c1, spec, sp, k4);
  for (std::size_t i = 0; i < n; ++i) {
    psi.values[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

}  // namespace

CoefficientSet linearizable_coefficients(double gamma, double gamma_dot, double mass) {
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  CoefficientSet c = CoefficientSet::linear();
  c.nu2 = gamma / (4.0 * mass);
  c.mu1 = gamma / (2.0 * mass);
  c.mu4 = -gamma / (2.0 * mass);
  c.mu2 = -gamma * gamma / (4.0 * mass);
  c.mu5 = gamma * gamma / (8.0 * mass);
  c.alpha1 = -0.5 * gamma_dot;
  return c;
}

CoefficientSet EvolutionSpec::coefficients_at(double t) const {
  if (!gauge_schedule) return coefficients;
  const double g = gauge_schedule->gamma(t);
  const double gd = gauge_schedule->gamma_dot(t);
  return dictionary ? dictionary(g, gd, mass) : linearizable_coefficients(g, gd, mass);
}

void EvolutionSpec::validate(const Grid& grid) const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigurationError("mass must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigurationError("dt must be positive");
  if (!coefficients.all_finite()) throw ConfigurationError("coefficients must be finite");
  if (gauge_schedule && !coefficients.is_linear()) {
    throw ConfigurationError("a gauge schedule drives the coefficients; leave them linear");
  }
  if (!potential.empty() && potential.size() != grid.size()) {
    throw ShapeError("potential does not match the grid");
  }
  for (double v : potential) {
    if (!std::isfinite(v)) throw ConfigurationError("potential must be finite");
  }
  node_floor.validate();
  const double kinetic_phase = dt * grid.max_wavenumber_squared() / (2.0 * mass);
  if (!(kinetic_phase < std::numbers::pi)) {
    std::ostringstream os;
    os << "dt = " << dt << " does not resolve the kinetic phase (dt k_max^2 / 2m = "
       << kinetic_phase << " >= pi)";
    throw ConfigurationError(os.str());
  }
}

std::string BlowupDiagnostic::describe() const {
  std::ostringstream os;
  os << "blow-up at t = " << time_of_detection << " (";
  switch (trigger) {
    case Trigger::nan: os << "non-finite values"; break;
    case Trigger::norm_growth: os << "norm grew by " << norm_ratio << "x"; break;
    case Trigger::overflow: os << "|psi| overflow"; break;
  }
  os << ")";
  return os.str();
}

BlowupError::BlowupError(BlowupDiagnostic d) : Error(d.describe()), diagnostic_(d) {}

const Wavefunction& PropagationResult::value() const {
  if (!ok()) throw BlowupError(blowup());
  return state();
}

Wavefunction propagate_linear(const Wavefunction& psi, const EvolutionSpec& spec,
                              double t_final) {
  if (!spec.is_linear()) throw ConfigurationError("propagate_linear needs the linear coefficient set");
  if (!(t_final >= 0.0)) throw DomainError("t_final must be non-negative");
  spec.validate(psi.grid);
  require_finite(psi);
  Wavefunction out = psi;
  if (t_final == 0.0) return out;

  const auto sp = Spectral::for_grid(psi.grid);
  const std::size_t steps = step_count(t_final, spec.dt);
  const double h = t_final / static_cast<double>(steps);
  const auto kinetic = kinetic_multiplier(*sp, spec.mass, h);
  const auto half = potential_phase(spec.potential, 1.0, 0.5 * h);
  for (std::size_t s = 0; s < steps; ++s) {
    apply_phase(out.values, half);
    apply_multiplier(*sp, out.values, kinetic);
    apply_phase(out.values, half);
  }
  out.time = psi.time + t_final;
  return out;
}

PropagationResult propagate_nonlinear(const Wavefunction& psi, const EvolutionSpec& spec,
                                      double t_final, double reference_norm) {
  if (!(t_final >= 0.0)) throw DomainError("t_final must be non-negative");
  spec.validate(psi.grid);
  require_finite(psi);
  double sum0 = sum_sq(psi.values);
  if (!(sum0 > 0.0)) throw DegenerateStateError("cannot propagate a zero-norm state");
  if (reference_norm > 0.0) sum0 = reference_norm * reference_norm / psi.grid.cell_volume();

  Wavefunction out = psi;
  if (t_final == 0.0) return out;

  const auto sp = Spectral::for_grid(psi.grid);
  const std::size_t steps = step_count(t_final, spec.dt);
  const double h = t_final / static_cast<double>(steps);
  const bool local_is_linear = !spec.gauge_schedule && !spec.coefficients.has_nonlinear_terms();
  const auto kinetic = kinetic_multiplier(*sp, spec.mass, h);
  const auto half = potential_phase(spec.potential, spec.coefficients.mu0, 0.5 * h);

  double t = psi.time;
  for (std::size_t s = 0; s < steps; ++s) {
    try {
      if (spec.scheme == Scheme::rk4_full) {
        rk4_full_step(out, t, h, spec, *sp);
      } else if (local_is_linear) {
        apply_phase(out.values, half);
        apply_multiplier(*sp, out.values, kinetic);
        apply_phase(out.values, half);
      } else {
        const auto c = spec.coefficients_at(t + 0.5 * h);
        rk4_local(out, 0.5 * h, c, spec);
        apply_multiplier(*sp, out.values, kinetic);
        rk4_local(out, 0.5 * h, c, spec);
      }
    } catch (const InvalidStateError&) {
      return BlowupDiagnostic{t + h, BlowupDiagnostic::Trigger::nan, std::nan("")};
    } catch (const DegenerateStateError&) {
      return BlowupDiagnostic{t + h, BlowupDiagnostic::Trigger::nan, 0.0};
    }
    t = psi.time + static_cast<double>(s + 1) * h;
    if (auto b = detect_blowup(out.values, sum0, t)) return *b;
  }
  out.time = psi.time + t_final;
  return out;
}

PropagationResult propagate(const Wavefunction& psi, const EvolutionSpec& spec, double t_final,
                            double reference_norm) {
  if (spec.is_linear() && spec.scheme == Scheme::strang_split) {
    return propagate_linear(psi, spec, t_final);
  }
  return propagate_nonlinear(psi, spec, t_final, reference_norm);
}

Wavefunction free_propagate(const Wavefunction& psi, double mass, double t) {
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  require_finite(psi);
  Wavefunction out = psi;
  if (t != 0.0) {
    const auto sp = Spectral::for_grid(psi.grid);
    apply_multiplier(*sp, out.values, kinetic_multiplier(*sp, mass, t));
  }
  out.time = psi.time + t;
  return out;
}

}  // namespace nlqm
