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

#include "nlqm/gauge.hpp"

#include <algorithm>
#include <cmath>

#include "nlqm/errors.hpp"
#include "nlqm/field_core.hpp"
#include "nlqm/spectral.hpp"

namespace nlqm {

GaugeSchedule GaugeSchedule::constant(double gamma) {
  if (!std::isfinite(gamma)) throw ConfigurationError("gamma must be finite");
  GaugeSchedule s;
  s.breakpoints_ = {{0.0, gamma}};
  return s;
}

GaugeSchedule GaugeSchedule::piecewise_linear(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.empty()) throw ConfigurationError("gauge schedule needs at least one breakpoint");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i].first) || !std::isfinite(breakpoints[i].second)) {
      throw ConfigurationError("gauge schedule breakpoints must be finite");
    }
    if (i > 0 && !(breakpoints[i].first > breakpoints[i - 1].first)) {
      throw ConfigurationError("gauge schedule times must be strictly increasing");
    }
  }
  GaugeSchedule s;
  s.breakpoints_ = std::move(breakpoints);
  return s;
}

double GaugeSchedule::gamma(double t) const {
  const auto& b = breakpoints_;
  if (b.size() == 1 || t <= b.front().first) return b.front().second;
  if (t >= b.back().first) return b.back().second;
  const auto it = std::upper_bound(b.begin(), b.end(), t,
                                   [](double v, const auto& p) { return v < p.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (t - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

double GaugeSchedule::gamma_dot(double t) const {
  const auto& b = breakpoints_;
  if (b.size() == 1 || t < b.front().first || t >= b.back().first) return 0.0;
  const auto it = std::upper_bound(b.begin(), b.end(), t,
                                   [](double v, const auto& p) { return v < p.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return (hi.second - lo.second) / (hi.first - lo.first);
}

Wavefunction apply_gauge(const Wavefunction& psi, double gamma, const NodeFloorPolicy& policy) {
  require_finite(psi);
  std::vector<double> rho(psi.values.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = std::norm(psi.values[i]);
  if (std::all_of(rho.begin(), rho.end(), [](double r) { return r == 0.0; })) {
    throw DegenerateStateError("gauge transformation of a zero-norm state");
  }
  Wavefunction out = psi;
  if (gamma == 0.0) return out;
  const auto rho_eff = effective_density(rho, policy);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    // gamma ln|psi| = (gamma / 2) ln rho_eff
    const double phase = 0.5 * gamma * std::log(rho_eff[i]);
    out.values[i] *= Complex{std::cos(phase), std::sin(phase)};
  }
  return out;
}

Wavefunction invert_gauge(const Wavefunction& psi, double gamma, const NodeFloorPolicy& policy) {
  return apply_gauge(psi, -gamma, policy);
}

Wavefunction apply_phase_gauge(const Wavefunction& psi, const RealField& theta) {
  require_same_grid(psi.grid, theta.grid);
  Wavefunction out = psi;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] *= Complex{std::cos(theta.values[i]), std::sin(theta.values[i])};
  }
  return out;
}

ProjectionSpec ProjectionSpec::identity() {
  ProjectionSpec p;
  p.identity_ = true;
  return p;
}

ProjectionSpec ProjectionSpec::position(Region region) {
  if (region.space() != Space::position) throw InvalidProjectionError("expected a position region");
  ProjectionSpec p;
  p.space_ = Space::position;
  p.data_ = std::move(region);
  return p;
}

ProjectionSpec ProjectionSpec::momentum_band(Region band) {
  if (band.space() != Space::momentum) throw InvalidProjectionError("expected a momentum region");
  ProjectionSpec p;
  p.space_ = Space::momentum;
  p.data_ = std::move(band);
  return p;
}

ProjectionSpec ProjectionSpec::diagonal(Space space, std::vector<double> multiplier) {
  ProjectionSpec p;
  p.space_ = space;
  p.data_ = std::move(multiplier);
  return p;
}

std::vector<double> ProjectionSpec::multiplier(const Grid& grid) const {
  if (identity_) return std::vector<double>(grid.size(), 1.0);
  if (const auto* r = std::get_if<Region>(&data_)) {
    const auto mask = r->mask(grid);
    return {mask.begin(), mask.end()};
  }
  const auto& m = std::get<std::vector<double>>(data_);
  if (m.size() != grid.size()) throw ShapeError("projection multiplier does not match the grid");
  for (double v : m) {
    if (std::abs(v * v - v) > 1e-14) {
      throw InvalidProjectionError("projection multiplier is not idempotent (entries must be 0 or 1)");
    }
  }
  return m;
}

Wavefunction apply_projection(const Wavefunction& psi, const ProjectionSpec& projection) {
  require_finite(psi);
  if (projection.is_identity()) return psi;
  const auto m = projection.multiplier(psi.grid);
  Wavefunction out = psi;
  if (projection.space() == Space::position) {
    for (std::size_t i = 0; i < m.size(); ++i) out.values[i] *= m[i];
    return out;
  }
  const auto sp = Spectral::for_grid(psi.grid);
  sp->forward(out.values, out.values);
  for (std::size_t i = 0; i < m.size(); ++i) out.values[i] *= m[i];
  sp->backward(out.values, out.values);
  return out;
}

Wavefunction generalized_projection(const Wavefunction& psi, const ProjectionSpec& projection,
                                    double gamma, const NodeFloorPolicy& policy) {
  if (gamma == 0.0) return apply_projection(psi, projection);
  const auto inner_state = invert_gauge(psi, gamma, policy);
  const auto projected = apply_projection(inner_state, projection);
  const bool vanished = std::all_of(projected.values.begin(), projected.values.end(),
                                    [](const Complex& v) { return v == Complex{0.0, 0.0}; });
  if (vanished) return projected;
  return apply_gauge(projected, gamma, policy);
}

Wavefunction map_forward(const GaugeMap& map, const Wavefunction& psi, double t) {
  return std::visit(
      [&](const auto& m) -> Wavefunction {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, IdentityMap>) {
          return psi;
        } else if constexpr (std::is_same_v<M, NonlinearGaugeMap>) {
          return apply_gauge(psi, m.schedule.gamma(t), m.node_floor);
        } else if constexpr (std::is_same_v<M, PhaseGaugeMap>) {
          return apply_phase_gauge(psi, m.theta);
        } else {
          return m.forward(psi, t);
        }
      },
      map);
}

Wavefunction map_inverse(const GaugeMap& map, const Wavefunction& psi, double t) {
  return std::visit(
      [&](const auto& m) -> Wavefunction {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, IdentityMap>) {
          return psi;
        } else if constexpr (std::is_same_v<M, NonlinearGaugeMap>) {
          return invert_gauge(psi, m.schedule.gamma(t), m.node_floor);
        } else if constexpr (std::is_same_v<M, PhaseGaugeMap>) {
          RealField neg = m.theta;
          for (auto& v : neg.values) v = -v;
          return apply_phase_gauge(psi, neg);
        } else {
          return m.inverse(psi, t);
        }
      },
      map);
}

EquivalenceReport check_topological_equivalence(const QuantumSystem& system,
                                                const QuantumSystem& other, const GaugeMap& map,
                                                const std::vector<Wavefunction>& states,
                                                const std::vector<Region>& regions,
                                                const std::vector<double>& times,
                                                const EquivalenceTolerances& tolerances) {
  if (states.empty() || regions.empty() || times.empty()) {
    throw ConfigurationError("equivalence check needs states, regions and times");
  }
  EquivalenceReport report;
  for (const auto& psi : states) {
    const Grid& grid = psi.grid;
    system.evolution.validate(grid);
    other.evolution.validate(grid);
    const double n0 = norm(psi);
    if (!(n0 > 0.0)) throw DegenerateStateError("equivalence sample with zero norm");

    const auto mapped = map_forward(map, psi, psi.time);
    require_same_grid(grid, mapped.grid);
    for (const auto& region : regions) {
      const double r = std::abs(born_probability(psi, region) - born_probability(mapped, region));
      report.max_position_residual = std::max(report.max_position_residual, r);
      ++report.sample_count;
    }
    for (double t : times) {
      const auto direct = propagate(psi, system.evolution, t);
      const auto conjugated = propagate(mapped, other.evolution, t);
      double r = std::numeric_limits<double>::infinity();
      if (direct.ok() && conjugated.ok()) {
        const auto back = map_inverse(map, conjugated.state(), psi.time + t);
        double s = 0.0;
        for (std::size_t i = 0; i < back.values.size(); ++i) {
          s += std::norm(direct.state().values[i] - back.values[i]);
        }
        r = std::sqrt(s * grid.cell_volume()) / n0;
      }
      report.max_evolution_residual = std::max(report.max_evolution_residual, r);
      ++report.sample_count;
    }
  }
  report.pass = report.max_position_residual <= tolerances.position &&
                report.max_evolution_residual <= tolerances.evolution;
  return report;
}

}  // namespace nlqm
