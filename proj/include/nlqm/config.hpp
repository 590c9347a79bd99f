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

#ifndef NLQM_CONFIG_HPP
#define NLQM_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "nlqm/coefficients.hpp"
#include "nlqm/dynamics.hpp"
#include "nlqm/field.hpp"
#include "nlqm/gauge_schedule.hpp"
#include "nlqm/observables.hpp"

namespace nlqm {

enum class ExperimentKind {
  linear_benchmark,
  linearizability,
  momentum_cone,
  mixture_distinguishability,
  gisin_signaling,
  blowup_scan,
};

const char* to_string(ExperimentKind kind);

struct GridSpec {
  std::size_t dims = 1;
  std::size_t points = 0;
  double length = 0.0;

  Grid build() const;
};

/// One-dimensional state families, plus the two-particle composite.
struct StateSpec {
  enum class Family { gaussian, plane_wave, superposition, random, two_particle };
  enum class Pairing { product, entangled };

  struct Term {
    Complex coefficient{1.0, 0.0};
    std::shared_ptr<StateSpec> state;
  };

  Family family = Family::gaussian;
  double center = 0.0;
  double width = 1.0;
  double k0 = 0.0;
  int images = 3;                 // periodic images summed for gaussian
  std::vector<Term> terms;        // superposition
  std::size_t modes = 8;          // random: number of low Fourier modes
  Pairing pairing = Pairing::product;
  std::shared_ptr<StateSpec> first;   // two_particle, particle 1
  std::shared_ptr<StateSpec> second;  // two_particle, particle 2

  /// Normalized state on `grid`. Random families draw from `seed`.
  Wavefunction build(const Grid& grid, std::uint64_t seed) const;
};

struct PotentialSpec {
  enum class Kind { zero, harmonic, square_well, table };

  Kind kind = Kind::zero;
  double omega = 0.0;       // harmonic: V = m omega^2 (x - center)^2 / 2
  double center = 0.0;
  double lo = 0.0;          // square_well: V = -depth on [lo, hi)
  double hi = 0.0;
  double depth = 0.0;
  std::vector<std::pair<double, double>> table;  // (x, V), piecewise linear

  /// Values on a line grid; empty for the zero potential.
  std::vector<double> build(const Grid& line, double mass) const;
};

struct TimeSpec {
  double t_final = 0.0;
  double dt = 1e-3;
  std::size_t samples = 10;
  std::vector<double> times;  // momentum_cone observation times
};

struct Tolerances {
  double width = 1e-6;
  double norm_drift = 1e-12;  // per 1000 steps
  double residual = 1e-4;
  double cone = 2e-3;
  double gap = 1e-10;
  double signaling = 1e-10;
  double factorization = 1e-5;
};

struct PerturbationSpec {
  std::string coefficient;
  double factor = 1.0;
};

struct MixtureSpec {
  struct Component {
    double weight = 1.0;
    StateSpec state;
  };
  enum class Unraveling { explicit_list, eigen, rotated };

  std::vector<Component> first;
  Unraveling unraveling = Unraveling::eigen;  // how the second mixture is formed
  std::vector<Component> second;              // explicit_list only
  double theta = 0.41421356237309515;         // rotated only
  std::vector<double> durations;              // effect family evolutions
  std::vector<Interval> regions;              // effect family regions
  std::string expect = "indistinguishable";
};

struct GisinSpec {
  PotentialSpec remote;                  // baseline V2
  std::vector<PotentialSpec> variants;   // alternative V2
  std::vector<Interval> regions;         // particle-1 marginal regions
  std::string expect = "no_signaling";   // no_signaling | signaling | measure
};

struct OutputSpec {
  std::string dir = "results";
  std::string prefix;  // defaults to the config file stem
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::linear_benchmark;
  GridSpec grid;
  double mass = 1.0;
  StateSpec state;
  PotentialSpec potential;
  CoefficientSet coefficients = CoefficientSet::linear();
  std::optional<GaugeSchedule> gauge_schedule;
  TimeSpec time;
  Tolerances tolerances;
  double node_floor = 1e-12;
  std::string scheme = "strang_split";
  std::uint64_t seed = 0;
  std::optional<PerturbationSpec> perturb;  // linearizability only
  std::vector<Interval> momentum_regions;   // momentum_cone only
  MixtureSpec mixture;
  GisinSpec gisin;
  OutputSpec output;

  /// Evolution for the configured coefficients on `grid` (potential built
  /// on axis 0 for line grids, left empty for plane grids).
  EvolutionSpec evolution(const Grid& grid) const;
};

/// Schema violation or unreadable config. `where` is a field path or a
/// line reference.
class ConfigError : public ConfigurationError {
 public:
  ConfigError(std::string where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Parses and validates. Unknown keys, wrong types, non-finite numbers and
/// inconsistent sections are ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical form: every field explicit, keys sorted.
nlohmann::json to_json(const ExperimentConfig& config);
std::string serialize_config(const ExperimentConfig& config);

}  // namespace nlqm

#endif  // NLQM_CONFIG_HPP
