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

#include "nlqm/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "nlqm/field_core.hpp"

namespace nlqm {

using nlohmann::json;

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::linear_benchmark: return "linear_benchmark";
    case ExperimentKind::linearizability: return "linearizability";
    case ExperimentKind::momentum_cone: return "momentum_cone";
    case ExperimentKind::mixture_distinguishability: return "mixture_distinguishability";
    case ExperimentKind::gisin_signaling: return "gisin_signaling";
    case ExperimentKind::blowup_scan: return "blowup_scan";
  }
  return "unknown";
}

ConfigError::ConfigError(std::string where, const std::string& what)
    : ConfigurationError(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

// ---------------------------------------------------------------------------
// Building physical objects

Grid GridSpec::build() const {
  const Axis axis{points, length};
  if (dims == 1) return Grid({axis});
  if (dims == 2) return Grid({axis, axis});
  throw ConfigurationError("grid dims must be 1 or 2");
}

namespace {

Wavefunction gaussian_state(const Grid& grid, const StateSpec& s) {
  const double L = grid.axis(0).length;
  Wavefunction psi(grid);
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const double x = grid.coordinate(0, i);
    Complex sum = 0.0;
    for (int n = -s.images; n <= s.images; ++n) {
      const double y = x - s.center + n * L;
      sum += std::exp(-y * y / (2.0 * s.width * s.width)) *
             std::exp(Complex(0.0, s.k0 * (x + n * L)));
    }
    psi.values[i] = sum;
  }
  return psi;
}

// 53-bit uniform on [0, 1) from a 64-bit engine; identical on every platform.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Wavefunction random_state(const Grid& grid, const StateSpec& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double L = grid.axis(0).length;
  const auto m = static_cast<int>(s.modes);
  std::vector<Complex> c;
  for (int j = -m; j <= m; ++j) c.emplace_back(uniform(rng) - 0.5, uniform(rng) - 0.5);
  Wavefunction psi = gaussian_state(grid, s);
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const double x = grid.coordinate(0, i);
    Complex mod = 0.0;
    for (int j = -m; j <= m; ++j) {
      mod += c[static_cast<std::size_t>(j + m)] *
             std::exp(Complex(0.0, 2.0 * std::numbers::pi * j * x / L));
    }
    psi.values[i] *= 1.0 + 0.3 * mod / static_cast<double>(m);
  }
  return psi;
}

Wavefunction build_line(const StateSpec& s, const Grid& line, std::uint64_t seed) {
  switch (s.family) {
    case StateSpec::Family::gaussian:
      return gaussian_state(line, s);
    case StateSpec::Family::plane_wave: {
      Wavefunction psi(line);
      for (std::size_t i = 0; i < psi.values.size(); ++i) {
        psi.values[i] = std::exp(Complex(0.0, s.k0 * line.coordinate(0, i)));
      }
      return psi;
    }
    case StateSpec::Family::superposition: {
      Wavefunction psi(line);
      std::uint64_t sub = seed;
      for (const auto& t : s.terms) {
        const auto part = t.state->build(line, sub++);
        for (std::size_t i = 0; i < psi.values.size(); ++i) psi.values[i] += t.coefficient * part.values[i];
      }
      return psi;
    }
    case StateSpec::Family::random:
      return random_state(line, s, seed);
    case StateSpec::Family::two_particle:
      break;
  }
  throw ConfigurationError("two_particle state needs a plane grid");
}

}  // namespace

Wavefunction StateSpec::build(const Grid& grid, std::uint64_t seed) const {
  if (family != Family::two_particle) {
    if (grid.dim() != 1) throw ConfigurationError("single-particle state needs a line grid");
    return normalized(build_line(*this, grid, seed));
  }
  if (grid.dim() != 2) throw ConfigurationError("two_particle state needs a plane grid");
  const Grid a0 = axis_grid(grid, 0);
  const Grid a1 = axis_grid(grid, 1);
  const auto f1 = first->build(a0, seed);
  const auto s2 = second->build(a1, seed + 1);
  auto psi = tensor_product(f1, s2);
  if (pairing == Pairing::entangled) {
    const auto swapped = tensor_product(second->build(a0, seed + 1), first->build(a1, seed));
    for (std::size_t i = 0; i < psi.values.size(); ++i) psi.values[i] += swapped.values[i];
  }
  return normalized(psi);
}

std::vector<double> PotentialSpec::build(const Grid& line, double mass) const {
  if (kind == Kind::zero) return {};
  const std::size_t n = line.axis(0).points;
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = line.coordinate(0, i);
    switch (kind) {
      case Kind::harmonic:
        v[i] = 0.5 * mass * omega * omega * (x - center) * (x - center);
        break;
      case Kind::square_well:
        v[i] = (x >= lo && x < hi) ? -depth : 0.0;
        break;
      case Kind::table: {
        if (x <= table.front().first) {
          v[i] = table.front().second;
        } else if (x >= table.back().first) {
          v[i] = table.back().second;
        } else {
          std::size_t j = 1;
          while (table[j].first < x) ++j;
          const auto& [x0, v0] = table[j - 1];
          const auto& [x1, v1] = table[j];
          v[i] = v0 + (v1 - v0) * (x - x0) / (x1 - x0);
        }
        break;
      }
      case Kind::zero:
        break;
    }
  }
  return v;
}

EvolutionSpec ExperimentConfig::evolution(const Grid& grid) const {
  EvolutionSpec ev;
  ev.mass = mass;
  if (grid.dim() == 1) ev.potential = potential.build(grid, mass);
  ev.coefficients = coefficients;
  ev.gauge_schedule = gauge_schedule;
  ev.dt = time.dt;
  ev.scheme = scheme == "rk4_full" ? Scheme::rk4_full : Scheme::strang_split;
  ev.node_floor.epsilon_rel = node_floor;
  return ev;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// Best-effort source line for a dotted field path: finds each key in turn.
std::optional<std::size_t> line_of_path(const std::string& text, const std::string& path) {
  std::size_t pos = 0;
  std::string segment;
  std::istringstream in(path);
  bool found = false;
  while (std::getline(in, segment, '.')) {
    const auto bracket = segment.find('[');
    const std::string key = segment.substr(0, bracket);
    if (key.empty()) continue;
    const auto hit = text.find("\"" + key + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit + key.size() + 2;
    found = true;
  }
  if (!found) return std::nullopt;
  return line_of_offset(text, pos);
}

class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_, what); }
  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  Node object(const std::string& key) {
    if (!has(key)) throw ConfigError(child_path(key), "required section is missing");
    return Node(raw(key), child_path(key));
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
  }

  double number(const std::string& key) {
    if (!has(key)) throw ConfigError(child_path(key), "required field is missing");
    return as_number(raw(key), child_path(key));
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }
  std::size_t count(const std::string& key, std::size_t fallback, bool required = false) {
    if (!has(key)) {
      if (required) throw ConfigError(child_path(key), "required field is missing");
      return fallback;
    }
    const auto& v = raw(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(child_path(key), "expected a nonnegative integer");
    }
    return v.get<std::size_t>();
  }
  std::string string(const std::string& key, const std::string& fallback, bool required = false) {
    if (!has(key)) {
      if (required) throw ConfigError(child_path(key), "required field is missing");
      return fallback;
    }
    const auto& v = raw(key);
    if (!v.is_string()) throw ConfigError(child_path(key), "expected a string");
    return v.get<std::string>();
  }
  std::string choice(const std::string& key, const std::string& fallback,
                     std::initializer_list<const char*> options, bool required = false) {
    const auto s = string(key, fallback, required);
    for (const char* o : options) {
      if (s == o) return s;
    }
    std::string list;
    for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
    throw ConfigError(child_path(key), "unknown value '" + s + "' (expected one of " + list + ")");
  }
  const json& array(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_array()) throw ConfigError(child_path(key), "expected an array");
    return v;
  }
  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) return {};
    const auto& v = array(key);
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_number(v[i], child_path(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError(child_path(key), "unknown key");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::pair<double, double> parse_pair(const json& v, const std::string& path, bool allow_null) {
  if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected a two-element array");
  auto read = [&](const json& e, double inf) {
    if (allow_null && e.is_null()) return inf;
    return Node::as_number(e, path);
  };
  return {read(v[0], -std::numeric_limits<double>::infinity()),
          read(v[1], std::numeric_limits<double>::infinity())};
}

std::vector<Interval> parse_intervals(Node& n, const std::string& key) {
  std::vector<Interval> out;
  if (!n.has(key)) return out;
  const auto& v = n.array(key);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto path = indexed(n.child_path(key), i);
    const auto [lo, hi] = parse_pair(v[i], path, true);
    if (!(lo < hi)) throw ConfigError(path, "interval must have lo < hi");
    out.push_back({lo, hi});
  }
  return out;
}

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

StateSpec parse_state(Node n) {
  StateSpec s;
  const auto family = n.choice("family", "", {"gaussian", "plane_wave", "superposition", "random",
                                              "two_particle"}, true);
  if (family == "gaussian" || family == "random") {
    s.family = family == "gaussian" ? StateSpec::Family::gaussian : StateSpec::Family::random;
    s.center = n.number("center", 0.0);
    s.width = n.number("width", 1.0);
    require(s.width > 0.0, n.child_path("width"), "must be positive");
    if (family == "gaussian") {
      s.k0 = n.number("k0", 0.0);
      s.images = static_cast<int>(n.count("images", 3));
      require(s.images <= 64, n.child_path("images"), "at most 64 images");
    } else {
      s.modes = n.count("modes", 8);
      require(s.modes >= 1 && s.modes <= 64, n.child_path("modes"), "must lie in [1, 64]");
    }
  } else if (family == "plane_wave") {
    s.family = StateSpec::Family::plane_wave;
    s.k0 = n.number("k0");
  } else if (family == "superposition") {
    s.family = StateSpec::Family::superposition;
    if (!n.has("terms")) throw ConfigError(n.child_path("terms"), "required field is missing");
    const auto& terms = n.array("terms");
    require(!terms.empty(), n.child_path("terms"), "must not be empty");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      Node t(terms[i], indexed(n.child_path("terms"), i));
      StateSpec::Term term;
      if (t.has("coefficient")) {
        const auto [re, im] = parse_pair(t.raw("coefficient"), t.child_path("coefficient"), false);
        term.coefficient = {re, im};
      }
      term.state = std::make_shared<StateSpec>(parse_state(t.object("state")));
      require(term.state->family != StateSpec::Family::two_particle, t.child_path("state"),
              "superpositions are single-particle");
      t.finish();
      s.terms.push_back(std::move(term));
    }
  } else {
    s.family = StateSpec::Family::two_particle;
    s.pairing = n.choice("pairing", "product", {"product", "entangled"}) == "entangled"
                    ? StateSpec::Pairing::entangled
                    : StateSpec::Pairing::product;
    s.first = std::make_shared<StateSpec>(parse_state(n.object("first")));
    s.second = std::make_shared<StateSpec>(parse_state(n.object("second")));
    require(s.first->family != StateSpec::Family::two_particle &&
                s.second->family != StateSpec::Family::two_particle,
            n.path(), "factors must be single-particle states");
  }
  n.finish();
  return s;
}

PotentialSpec parse_potential(Node n) {
  PotentialSpec p;
  const auto kind = n.choice("kind", "", {"zero", "harmonic", "square_well", "table"}, true);
  if (kind == "harmonic") {
    p.kind = PotentialSpec::Kind::harmonic;
    p.omega = n.number("omega");
    p.center = n.number("center", 0.0);
  } else if (kind == "square_well") {
    p.kind = PotentialSpec::Kind::square_well;
    p.lo = n.number("lo");
    p.hi = n.number("hi");
    p.depth = n.number("depth");
    require(p.lo < p.hi, n.path(), "square_well needs lo < hi");
  } else if (kind == "table") {
    p.kind = PotentialSpec::Kind::table;
    if (!n.has("points")) throw ConfigError(n.child_path("points"), "required field is missing");
    const auto& pts = n.array("points");
    require(!pts.empty(), n.child_path("points"), "must not be empty");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto path = indexed(n.child_path("points"), i);
      p.table.push_back(parse_pair(pts[i], path, false));
      require(i == 0 || p.table[i].first > p.table[i - 1].first, path,
              "breakpoint positions must be strictly increasing");
    }
  }
  n.finish();
  return p;
}

std::vector<MixtureSpec::Component> parse_components(Node& n, const std::string& key) {
  std::vector<MixtureSpec::Component> out;
  if (!n.has(key)) throw ConfigError(n.child_path(key), "required field is missing");
  const auto& v = n.array(key);
  require(!v.empty(), n.child_path(key), "must not be empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Node c(v[i], indexed(n.child_path(key), i));
    MixtureSpec::Component comp;
    comp.weight = c.number("weight");
    require(comp.weight > 0.0 && comp.weight <= 1.0, c.child_path("weight"), "must lie in (0, 1]");
    comp.state = parse_state(c.object("state"));
    require(comp.state.family != StateSpec::Family::two_particle, c.child_path("state"),
            "mixture components are single-particle");
    c.finish();
    sum += comp.weight;
    out.push_back(std::move(comp));
  }
  require(std::abs(sum - 1.0) <= 1e-12, n.child_path(key), "weights must sum to 1");
  return out;
}

void forbid(const Node& n, const std::string& key, ExperimentKind kind) {
  if (n.has(key)) {
    throw ConfigError(n.child_path(key),
                      std::string("section does not apply to kind ") + to_string(kind));
  }
}

ExperimentConfig parse_root(Node root) {
  ExperimentConfig c;
  const auto kind = root.choice(
      "kind", "",
      {"linear_benchmark", "linearizability", "momentum_cone", "mixture_distinguishability",
       "gisin_signaling", "blowup_scan"},
      true);
  for (auto k : {ExperimentKind::linear_benchmark, ExperimentKind::linearizability,
                 ExperimentKind::momentum_cone, ExperimentKind::mixture_distinguishability,
                 ExperimentKind::gisin_signaling, ExperimentKind::blowup_scan}) {
    if (kind == to_string(k)) c.kind = k;
  }
  const auto K = c.kind;

  {
    Node g = root.object("grid");
    c.grid.dims = g.count("dims", 1);
    c.grid.points = g.count("points", 0, true);
    c.grid.length = g.number("length");
    g.finish();
    try {
      (void)c.grid.build();
    } catch (const Error& e) {
      throw ConfigError(g.path(), e.what());
    }
    const bool plane = K == ExperimentKind::gisin_signaling;
    require(c.grid.dims == (plane ? 2u : 1u), g.child_path("dims"),
            plane ? "gisin_signaling needs dims = 2" : "this kind needs dims = 1");
  }

  c.mass = root.number("mass", 1.0);
  require(c.mass > 0.0, "mass", "must be positive");

  if (K == ExperimentKind::mixture_distinguishability) {
    forbid(root, "state", K);
  } else {
    c.state = parse_state(root.object("state"));
    const bool two = c.state.family == StateSpec::Family::two_particle;
    require(two == (K == ExperimentKind::gisin_signaling), "state.family",
            two ? "two_particle states need kind gisin_signaling"
                : "gisin_signaling needs a two_particle state");
  }

  if (root.has("potential")) c.potential = parse_potential(root.object("potential"));

  if (root.has("coefficients")) {
    Node n = root.object("coefficients");
    for (std::size_t i = 0; i < CoefficientSet::count; ++i) {
      c.coefficients[i] = n.number(std::string(CoefficientSet::names[i]), c.coefficients[i]);
    }
    n.finish();
  }

  if (K == ExperimentKind::linearizability) {
    Node n = root.object("gauge_schedule");
    require(n.has("constant") != n.has("breakpoints"), n.path(),
            "give exactly one of constant or breakpoints");
    try {
      if (n.has("constant")) {
        c.gauge_schedule = GaugeSchedule::constant(n.number("constant"));
      } else {
        std::vector<std::pair<double, double>> bps;
        const auto& v = n.array("breakpoints");
        for (std::size_t i = 0; i < v.size(); ++i) {
          bps.push_back(parse_pair(v[i], indexed(n.child_path("breakpoints"), i), false));
        }
        c.gauge_schedule = GaugeSchedule::piecewise_linear(std::move(bps));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(n.path(), e.what());
    }
    n.finish();
    require(c.coefficients.is_linear(), "coefficients",
            "linearizability takes its coefficients from the gauge schedule");
  } else {
    forbid(root, "gauge_schedule", K);
  }

  {
    Node t = root.object("time");
    if (K == ExperimentKind::momentum_cone) {
      c.time.times = t.numbers("times");
      require(!c.time.times.empty(), t.child_path("times"), "must not be empty");
      for (std::size_t i = 0; i < c.time.times.size(); ++i) {
        require(c.time.times[i] > 0.0 && (i == 0 || c.time.times[i] > c.time.times[i - 1]),
                indexed(t.child_path("times"), i), "times must be positive and increasing");
      }
      c.time.t_final = c.time.times.back();
      if (t.has("dt")) c.time.dt = t.number("dt");
    } else {
      c.time.t_final = t.number("t_final");
      c.time.dt = t.number("dt", c.time.dt);
      c.time.samples = t.count("samples", c.time.samples);
      require(c.time.samples >= 1, t.child_path("samples"), "must be at least 1");
    }
    require(c.time.t_final > 0.0, t.child_path("t_final"), "must be positive");
    require(c.time.dt > 0.0, t.child_path("dt"), "must be positive");
    t.finish();
  }

  if (root.has("tolerances")) {
    Node n = root.object("tolerances");
    auto& tol = c.tolerances;
    for (auto [key, ptr] : std::initializer_list<std::pair<const char*, double*>>{
             {"width", &tol.width}, {"norm_drift", &tol.norm_drift}, {"residual", &tol.residual},
             {"cone", &tol.cone}, {"gap", &tol.gap}, {"signaling", &tol.signaling},
             {"factorization", &tol.factorization}}) {
      *ptr = n.number(key, *ptr);
      require(*ptr > 0.0, n.child_path(key), "must be positive");
    }
    n.finish();
  }

  c.node_floor = root.number("node_floor", c.node_floor);
  require(c.node_floor > 0.0 && c.node_floor <= 1e-6, "node_floor", "must lie in (0, 1e-6]");
  c.scheme = root.choice("scheme", "strang_split", {"strang_split", "rk4_full"});
  if (root.has("seed")) {
    const auto& v = root.raw("seed");
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0), "seed",
            "expected a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  }

  if (root.has("perturb")) {
    require(K == ExperimentKind::linearizability, "perturb",
            std::string("section does not apply to kind ") + to_string(K));
    Node n = root.object("perturb");
    PerturbationSpec p;
    p.coefficient = n.string("coefficient", "", true);
    try {
      (void)CoefficientSet::index_of(p.coefficient);
    } catch (const ConfigurationError&) {
      throw ConfigError(n.child_path("coefficient"), "unknown coefficient '" + p.coefficient + "'");
    }
    p.factor = n.number("factor");
    n.finish();
    c.perturb = p;
  }

  if (K == ExperimentKind::momentum_cone) {
    c.momentum_regions = parse_intervals(root, "momentum_regions");
    require(!c.momentum_regions.empty(), "momentum_regions", "must not be empty");
  } else {
    forbid(root, "momentum_regions", K);
  }

  if (K == ExperimentKind::mixture_distinguishability) {
    Node n = root.object("mixture");
    auto& m = c.mixture;
    m.first = parse_components(n, "first");
    const auto u = n.choice("unraveling", "eigen", {"explicit", "eigen", "rotated"});
    if (u == "explicit") {
      m.unraveling = MixtureSpec::Unraveling::explicit_list;
      m.second = parse_components(n, "second");
    } else {
      m.unraveling = u == "eigen" ? MixtureSpec::Unraveling::eigen : MixtureSpec::Unraveling::rotated;
      if (n.has("second")) throw ConfigError(n.child_path("second"), "only used with unraveling explicit");
    }
    if (u == "rotated") {
      m.theta = n.number("theta", m.theta);
    } else if (n.has("theta")) {
      throw ConfigError(n.child_path("theta"), "only used with unraveling rotated");
    }
    m.durations = n.numbers("durations");
    if (m.durations.empty()) {
      for (int i = 1; i <= 3; ++i) m.durations.push_back(c.time.t_final * i / 3.0);
    }
    for (std::size_t i = 0; i < m.durations.size(); ++i) {
      require(m.durations[i] >= 0.0, indexed(n.child_path("durations"), i), "must be nonnegative");
    }
    m.regions = parse_intervals(n, "regions");
    if (m.regions.empty()) {
      const double L = c.grid.length;
      for (int i = 0; i < 8; ++i) m.regions.push_back({-L / 2 + L * i / 8.0, -L / 2 + L * (i + 1) / 8.0});
    }
    m.expect = n.choice("expect", "indistinguishable", {"indistinguishable", "distinguishable"});
    n.finish();
  } else {
    forbid(root, "mixture", K);
  }

  if (K == ExperimentKind::gisin_signaling) {
    Node n = root.object("gisin");
    auto& g = c.gisin;
    g.remote = n.has("remote") ? parse_potential(n.object("remote")) : PotentialSpec{};
    if (!n.has("variants")) throw ConfigError(n.child_path("variants"), "required field is missing");
    const auto& v = n.array("variants");
    require(!v.empty(), n.child_path("variants"), "must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      g.variants.push_back(parse_potential(Node(v[i], indexed(n.child_path("variants"), i))));
    }
    g.regions = parse_intervals(n, "regions");
    require(!g.regions.empty(), n.child_path("regions"), "must not be empty");
    g.expect = n.choice("expect", "no_signaling", {"no_signaling", "signaling", "measure"});
    n.finish();
  } else {
    forbid(root, "gisin", K);
  }

  if (root.has("output")) {
    Node n = root.object("output");
    c.output.dir = n.string("dir", c.output.dir);
    c.output.prefix = n.string("prefix", "");
    require(!c.output.dir.empty(), n.child_path("dir"), "must not be empty");
    require(c.output.prefix.find('/') == std::string::npos, n.child_path("prefix"),
            "must not contain '/'");
    n.finish();
  }

  root.finish();

  try {
    const Grid grid = c.grid.build();
    if (grid.dim() == 1 && K != ExperimentKind::mixture_distinguishability) {
      (void)c.state.build(grid, c.seed);
    }
    c.evolution(grid).validate(grid);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("", e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Serialization

json interval_json(const Interval& iv) {
  json a = json::array();
  a.push_back(std::isinf(iv.lo) ? json(nullptr) : json(iv.lo));
  a.push_back(std::isinf(iv.hi) ? json(nullptr) : json(iv.hi));
  return a;
}

json intervals_json(const std::vector<Interval>& v) {
  json a = json::array();
  for (const auto& iv : v) a.push_back(interval_json(iv));
  return a;
}

json state_json(const StateSpec& s) {
  json j;
  switch (s.family) {
    case StateSpec::Family::gaussian:
      j = {{"family", "gaussian"}, {"center", s.center}, {"width", s.width}, {"k0", s.k0},
           {"images", s.images}};
      break;
    case StateSpec::Family::random:
      j = {{"family", "random"}, {"center", s.center}, {"width", s.width}, {"modes", s.modes}};
      break;
    case StateSpec::Family::plane_wave:
      j = {{"family", "plane_wave"}, {"k0", s.k0}};
      break;
    case StateSpec::Family::superposition: {
      json terms = json::array();
      for (const auto& t : s.terms) {
        terms.push_back({{"coefficient", {t.coefficient.real(), t.coefficient.imag()}},
                         {"state", state_json(*t.state)}});
      }
      j = {{"family", "superposition"}, {"terms", terms}};
      break;
    }
    case StateSpec::Family::two_particle:
      j = {{"family", "two_particle"},
           {"pairing", s.pairing == StateSpec::Pairing::entangled ? "entangled" : "product"},
           {"first", state_json(*s.first)},
           {"second", state_json(*s.second)}};
      break;
  }
  return j;
}

json potential_json(const PotentialSpec& p) {
  switch (p.kind) {
    case PotentialSpec::Kind::zero:
      return {{"kind", "zero"}};
    case PotentialSpec::Kind::harmonic:
      return {{"kind", "harmonic"}, {"omega", p.omega}, {"center", p.center}};
    case PotentialSpec::Kind::square_well:
      return {{"kind", "square_well"}, {"lo", p.lo}, {"hi", p.hi}, {"depth", p.depth}};
    case PotentialSpec::Kind::table: {
      json pts = json::array();
      for (const auto& [x, v] : p.table) pts.push_back({x, v});
      return {{"kind", "table"}, {"points", pts}};
    }
  }
  return {};
}

json components_json(const std::vector<MixtureSpec::Component>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back({{"weight", c.weight}, {"state", state_json(c.state)}});
  return a;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  const auto K = c.kind;
  json j;
  j["kind"] = to_string(K);
  j["grid"] = {{"dims", c.grid.dims}, {"points", c.grid.points}, {"length", c.grid.length}};
  j["mass"] = c.mass;
  if (K != ExperimentKind::mixture_distinguishability) j["state"] = state_json(c.state);
  j["potential"] = potential_json(c.potential);
  json coeffs;
  for (std::size_t i = 0; i < CoefficientSet::count; ++i) coeffs[std::string(CoefficientSet::names[i])] = c.coefficients[i];
  j["coefficients"] = coeffs;
  if (c.gauge_schedule) {
    json bps = json::array();
    for (const auto& [t, g] : c.gauge_schedule->breakpoints()) bps.push_back({t, g});
    j["gauge_schedule"] = {{"breakpoints", bps}};
  }
  if (K == ExperimentKind::momentum_cone) {
    j["time"] = {{"times", c.time.times}, {"dt", c.time.dt}};
  } else {
    j["time"] = {{"t_final", c.time.t_final}, {"dt", c.time.dt}, {"samples", c.time.samples}};
  }
  const auto& tol = c.tolerances;
  j["tolerances"] = {{"width", tol.width},         {"norm_drift", tol.norm_drift},
                     {"residual", tol.residual},   {"cone", tol.cone},
                     {"gap", tol.gap},             {"signaling", tol.signaling},
                     {"factorization", tol.factorization}};
  j["node_floor"] = c.node_floor;
  j["scheme"] = c.scheme;
  j["seed"] = c.seed;
  if (c.perturb) j["perturb"] = {{"coefficient", c.perturb->coefficient}, {"factor", c.perturb->factor}};
  if (K == ExperimentKind::momentum_cone) j["momentum_regions"] = intervals_json(c.momentum_regions);
  if (K == ExperimentKind::mixture_distinguishability) {
    const auto& m = c.mixture;
    json mj;
    mj["first"] = components_json(m.first);
    switch (m.unraveling) {
      case MixtureSpec::Unraveling::explicit_list:
        mj["unraveling"] = "explicit";
        mj["second"] = components_json(m.second);
        break;
      case MixtureSpec::Unraveling::eigen:
        mj["unraveling"] = "eigen";
        break;
      case MixtureSpec::Unraveling::rotated:
        mj["unraveling"] = "rotated";
        mj["theta"] = m.theta;
        break;
    }
    mj["durations"] = m.durations;
    mj["regions"] = intervals_json(m.regions);
    mj["expect"] = m.expect;
    j["mixture"] = mj;
  }
  if (K == ExperimentKind::gisin_signaling) {
    json variants = json::array();
    for (const auto& p : c.gisin.variants) variants.push_back(potential_json(p));
    j["gisin"] = {{"remote", potential_json(c.gisin.remote)},
                  {"variants", variants},
                  {"regions", intervals_json(c.gisin.regions)},
                  {"expect", c.gisin.expect}};
  }
  j["output"] = {{"dir", c.output.dir}, {"prefix", c.output.prefix}};
  return j;
}

std::string serialize_config(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)),
                      "malformed config");
  }
  try {
    return parse_root(Node(j, ""));
  } catch (const ConfigError& e) {
    const auto line = e.where().empty() ? std::nullopt : line_of_path(text, e.where());
    if (!line) throw;
    std::string what = e.what();
    throw ConfigError(e.where(), what.substr(e.where().size() + 2) + " (near line " +
                                     std::to_string(*line) + ")");
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot read config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace nlqm
