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

#include "nlqm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <string>

#include "nlqm/errors.hpp"
#include "nlqm/field_core.hpp"

namespace nlqm {

namespace {

// Extent covered by the cells of one axis, in position or momentum space.
Interval cell_extent(const Grid& grid, std::size_t a, Space space) {
  const auto& ax = grid.axis(a);
  if (space == Space::position) {
    const double dx = ax.spacing();
    return {-0.5 * ax.length - 0.5 * dx, 0.5 * ax.length - 0.5 * dx};
  }
  const double dk = 2.0 * std::numbers::pi / ax.length;
  const double half = static_cast<double>(ax.points / 2);
  return {-(half + 0.5) * dk, (half - 0.5) * dk};
}

Interval intersect(Interval a, Interval b) {
  Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  if (r.hi < r.lo) r.hi = r.lo;
  return r;
}

double length(const Interval& iv) { return iv.hi - iv.lo; }

}  // namespace

ConeRegion velocity_cone(const Region& momentum_region, double t, double mass, const Grid& grid) {
  if (!(t > 0.0)) throw DomainError("velocity cone needs t > 0");
  if (!(mass > 0.0)) throw DomainError("velocity cone needs mass > 0");
  if (momentum_region.space() != Space::momentum) {
    throw DomainError("velocity cone expects a momentum-space region");
  }
  if (momentum_region.dim() != grid.dim()) throw ShapeError("region and grid dimensions differ");

  const double scale = t / mass;
  Region out(Space::position, grid.dim());
  double total = 0.0;
  double kept = 0.0;
  for (const auto& box : momentum_region.boxes()) {
    std::vector<Interval> clipped;
    double box_total = 1.0;
    double box_kept = 1.0;
    for (std::size_t a = 0; a < grid.dim(); ++a) {
      const auto k = intersect(box[a], cell_extent(grid, a, Space::momentum));
      const Interval x{k.lo * scale, k.hi * scale};
      const auto inside = intersect(x, cell_extent(grid, a, Space::position));
      box_total *= length(x);
      box_kept *= length(inside);
      clipped.push_back(inside);
    }
    total += box_total;
    kept += box_kept;
    out.add(std::move(clipped));
  }
  const double fraction = total > 0.0 ? std::max(0.0, 1.0 - kept / total) : 0.0;
  return {std::move(out), fraction};
}

double fourier_momentum_probability(const Wavefunction& psi, const Region& momentum_region) {
  if (momentum_region.space() != Space::momentum) {
    throw DomainError("fourier_momentum_probability expects a momentum region");
  }
  const auto phi = fourier(psi);
  const auto w = momentum_region.weights(psi.grid);
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    const double r = std::norm(phi.values[i]);
    total += r;
    inside += w[i] * r;
  }
  if (!(total > 0.0)) throw DegenerateStateError("momentum probability of a zero-norm state");
  return inside / total;
}

AsymptoticMomentumSeries asymptotic_momentum_probability(const Wavefunction& psi,
                                                         const Region& momentum_region,
                                                         double mass,
                                                         const std::vector<double>& times) {
  if (times.empty()) throw DomainError("asymptotic momentum needs at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw DomainError("asymptotic momentum times must be positive and increasing");
    }
  }

  // Momentum mass whose cone center lands outside the box at the last time.
  const auto phi = fourier(psi);
  const double scale = times.back() / mass;
  double total = 0.0;
  double leaked = 0.0;
  for (std::size_t flat = 0; flat < phi.values.size(); ++flat) {
    const auto idx = psi.grid.unravel(flat);
    bool outside = false;
    for (std::size_t a = 0; a < psi.grid.dim(); ++a) {
      const Interval box = cell_extent(psi.grid, a, Space::position);
      outside = outside || !box.contains(scale * psi.grid.wavenumber(a, idx[a]));
    }
    const double r = std::norm(phi.values[flat]);
    total += r;
    if (outside) leaked += r;
  }
  if (!(total > 0.0)) throw DegenerateStateError("asymptotic momentum of a zero-norm state");

  AsymptoticMomentumSeries s;
  s.leak_fraction = leaked / total;
  if (s.leak_fraction > kMaxConeLeak) {
    throw BoxTooSmallError("box too small: " + std::to_string(s.leak_fraction) +
                           " of the momentum mass leaves the box by t = " +
                           std::to_string(times.back()));
  }
  for (double t : times) {
    const auto cone = velocity_cone(momentum_region, t, mass, psi.grid);
    s.times.push_back(t);
    s.probabilities.push_back(born_probability(free_propagate(psi, mass, t), cone.region));
  }
  s.estimate = s.probabilities.back();
  const auto& p = s.probabilities;
  s.monotone = std::is_sorted(p.begin(), p.end()) || std::is_sorted(p.rbegin(), p.rend());
  return s;
}

double Effect::operator()(const Wavefunction& psi) const {
  if (duration == 0.0) return born_probability(psi, region);
  return born_probability(propagate(psi, evolution, duration).value(), region);
}

Mixture::Mixture(std::vector<MixtureComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw ConfigurationError("mixture needs at least one component");
  double sum = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0 && c.weight <= 1.0)) {
      throw ConfigurationError("mixture weights must lie in (0, 1]");
    }
    require_same_grid(c.state.grid, components_.front().state.grid);
    if (!(norm(c.state) > 0.0)) throw DegenerateStateError("mixture component with zero norm");
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ConfigurationError("mixture weights must sum to 1");
}

Mixture Mixture::merged(const Mixture& other, double w) const {
  if (!(w > 0.0 && w < 1.0)) throw DomainError("merge weight must lie in (0, 1)");
  std::vector<MixtureComponent> all;
  for (const auto& c : components_) all.push_back({w * c.weight, c.state});
  for (const auto& c : other.components_) all.push_back({(1.0 - w) * c.weight, c.state});
  return Mixture(std::move(all));
}

double effect_on_mixture(const Effect& effect, const Mixture& mixture) {
  double v = 0.0;
  for (const auto& c : mixture.components()) v += c.weight * effect(c.state);
  return v;
}

namespace {

bool same_evolution(const Effect& a, const Effect& b) {
  const auto& x = a.evolution;
  const auto& y = b.evolution;
  return a.duration == b.duration && !x.dictionary && !y.dictionary && x.mass == y.mass &&
         x.potential == y.potential && x.coefficients == y.coefficients &&
         x.gauge_schedule == y.gauge_schedule && x.dt == y.dt && x.scheme == y.scheme &&
         x.node_floor.epsilon_rel == y.node_floor.epsilon_rel;
}

// Effect values on every component of a mixture; effects sharing one
// evolution evolve each component once.
std::vector<double> effect_values(const std::vector<Effect>& effects, const Mixture& mixture) {
  std::vector<double> out(effects.size(), 0.0);
  std::vector<char> done(effects.size(), 0);
  for (std::size_t i = 0; i < effects.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> group{i};
    for (std::size_t j = i + 1; j < effects.size(); ++j) {
      if (!done[j] && same_evolution(effects[i], effects[j])) group.push_back(j);
    }
    for (const auto& c : mixture.components()) {
      const Wavefunction evolved = effects[i].duration == 0.0
                                       ? c.state
                                       : propagate(c.state, effects[i].evolution, effects[i].duration).value();
      for (std::size_t j : group) out[j] += c.weight * born_probability(evolved, effects[j].region);
    }
    for (std::size_t j : group) done[j] = 1;
  }
  return out;
}

}  // namespace

Distinguishability mixtures_distinguishable(const Mixture& first, const Mixture& second,
                                            const std::vector<Effect>& effects, double tol) {
  if (effects.empty()) throw ConfigurationError("distinguishability needs a nonempty effect family");
  const auto a = effect_values(effects, first);
  const auto b = effect_values(effects, second);
  Distinguishability d;
  d.family_size = effects.size();
  for (std::size_t i = 0; i < effects.size(); ++i) {
    const double g = std::abs(a[i] - b[i]);
    d.gaps.push_back(g);
    if (!d.witness || g > d.gap) {
      d.gap = g;
      d.witness = i;
    }
  }
  d.distinguishable = d.gap > tol;
  if (!d.distinguishable) d.witness.reset();
  return d;
}

double DensityMatrix::hermiticity_error() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double DensityMatrix::position_probability(const Region& region) const {
  const auto w = region.weights(grid);
  double p = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    p += w[i] * matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  return p;
}

DensityMatrix density_matrix(const Mixture& mixture) {
  const Grid& grid = mixture.grid();
  if (grid.size() > kMaxDensityMatrixPoints) {
    throw CapacityError("density matrix limited to " + std::to_string(kMaxDensityMatrixPoints) +
                        " grid points, got " + std::to_string(grid.size()));
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  DensityMatrix w{grid, Eigen::MatrixXcd::Zero(n, n)};
  const double dv = grid.cell_volume();
  for (const auto& c : mixture.components()) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = c.state.values[static_cast<std::size_t>(i)];
    w.matrix.noalias() += (c.weight * dv) * (v * v.adjoint());
  }
  return w;
}

std::vector<double> schmidt_coefficients(const Wavefunction& psi) {
  if (psi.grid.dim() != 2) throw ShapeError("Schmidt decomposition needs a two-particle state");
  const auto n0 = static_cast<Eigen::Index>(psi.grid.axis(0).points);
  const auto n1 = static_cast<Eigen::Index>(psi.grid.axis(1).points);
  Eigen::MatrixXcd m(n0, n1);
  for (Eigen::Index i = 0; i < n0; ++i) {
    for (Eigen::Index j = 0; j < n1; ++j) m(i, j) = psi.values[static_cast<std::size_t>(i * n1 + j)];
  }
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  const double total = s.squaredNorm();
  if (!(total > 0.0)) throw DegenerateStateError("Schmidt decomposition of a zero state");
  std::vector<double> out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = s(i) * s(i) / total;
  return out;
}

bool is_entangled(const Wavefunction& psi) { return schmidt_coefficients(psi).front() < 1.0 - 1e-8; }

PropagationResult evolve_two_particle(const TwoParticleSpec& spec, const std::vector<double>& v2,
                                      double t, double reference_norm) {
  if (spec.grid.dim() != 2) throw ShapeError("two-particle spec needs a plane grid");
  require_same_grid(spec.grid, spec.initial.grid);
  if (!spec.evolution.potential.empty()) {
    throw ConfigurationError("two-particle potential must be given as the separable pair");
  }
  const std::size_t n0 = spec.grid.axis(0).points;
  const std::size_t n1 = spec.grid.axis(1).points;
  if ((!spec.v1.empty() && spec.v1.size() != n0) || (!v2.empty() && v2.size() != n1)) {
    throw ShapeError("single-particle potential does not match its axis");
  }
  EvolutionSpec ev = spec.evolution;
  if (!spec.v1.empty() || !v2.empty()) {
    ev.potential.assign(spec.grid.size(), 0.0);
    for (std::size_t i = 0; i < n0; ++i) {
      for (std::size_t j = 0; j < n1; ++j) {
        ev.potential[i * n1 + j] = (spec.v1.empty() ? 0.0 : spec.v1[i]) + (v2.empty() ? 0.0 : v2[j]);
      }
    }
  }
  return propagate(spec.initial, ev, t, reference_norm);
}

SignalingReport gisin_experiment(const TwoParticleSpec& spec,
                                 const std::vector<std::vector<double>>& remote_potentials,
                                 double t, const std::vector<Region>& marginal_regions) {
  if (marginal_regions.empty()) throw ConfigurationError("signaling test needs marginal regions");
  SignalingReport report;
  report.entangled = is_entangled(spec.initial);

  const Grid line = axis_grid(spec.grid, 0);
  std::vector<std::vector<double>> weights;
  for (const auto& r : marginal_regions) {
    if (r.space() != Space::position || r.dim() != 1) {
      throw DomainError("marginal regions must be position intervals on particle 1");
    }
    weights.push_back(r.weights(line));
  }

  auto probabilities = [&](const Wavefunction& psi) {
    const auto m = marginal_density(psi, 0);
    double total = 0.0;
    for (double v : m.values) total += v;
    std::vector<double> p;
    for (const auto& w : weights) {
      double s = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * m.values[i];
      p.push_back(s / total);
    }
    return p;
  };

  std::vector<std::future<PropagationResult>> runs;
  runs.push_back(std::async(std::launch::async, [&] { return evolve_two_particle(spec, spec.v2, t); }));
  for (const auto& v2 : remote_potentials) {
    runs.push_back(std::async(std::launch::async, [&spec, &v2, t] {
      return evolve_two_particle(spec, v2, t);
    }));
  }
  std::vector<PropagationResult> results;
  for (auto& r : runs) results.push_back(r.get());

  for (const auto& r : results) {
    if (!r.ok()) {
      report.blowup = r.blowup();
      report.statistic = std::numeric_limits<double>::infinity();
      return report;
    }
  }
  report.baseline = probabilities(results.front().state());
  for (std::size_t v = 1; v < results.size(); ++v) {
    auto p = probabilities(results[v].state());
    for (std::size_t b = 0; b < p.size(); ++b) {
      report.statistic = std::max(report.statistic, std::abs(p[b] - report.baseline[b]));
    }
    report.variants.push_back(std::move(p));
  }
  return report;
}

}  // namespace nlqm
