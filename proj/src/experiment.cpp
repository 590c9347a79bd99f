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

#include "nlqm/experiment.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "nlqm/field_core.hpp"
#include "nlqm/gauge.hpp"
#include "nlqm/observables.hpp"
#include "nlqm/spectral.hpp"

namespace nlqm {

using nlohmann::json;
namespace fs = std::filesystem;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::blowup: return "blowup";
  }
  return "fail";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return kExitPass;
    case Verdict::fail: return kExitFail;
    case Verdict::blowup: return kExitBlowup;
  }
  return kExitFail;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string SeriesTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

namespace {

std::string digest_hex(const EVP_MD* md, std::string_view data) {
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out, &len, md, nullptr);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[out[i] >> 4];
    s += hex[out[i] & 15];
  }
  return s;
}

}  // namespace

std::string sha256_hex(std::string_view data) { return digest_hex(EVP_sha256(), data); }

std::string git_blob_sha1(std::string_view data) {
  std::string blob = "blob " + std::to_string(data.size());
  blob.push_back('\0');
  blob.append(data);
  return digest_hex(EVP_sha1(), blob);
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid()) + "." +
                       std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot rename into " + path.string());
  }
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

double energy(const Wavefunction& psi, double mass, const std::vector<double>& v) {
  const auto sp = Spectral::for_grid(psi.grid);
  std::vector<Complex> f(psi.values.size());
  sp->forward(psi.values, f);
  const auto& k2 = sp->k_squared();
  double kinetic = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    kinetic += k2[i] * std::norm(f[i]);
    weight += std::norm(f[i]);
  }
  double potential = 0.0;
  double n = 0.0;
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const double r = std::norm(psi.values[i]);
    n += r;
    if (!v.empty()) potential += v[i] * r;
  }
  return kinetic / (2.0 * mass * weight) + potential / n;
}

std::vector<double> sample_times(const TimeSpec& t) {
  std::vector<double> out;
  for (std::size_t i = 0; i <= t.samples; ++i) {
    out.push_back(t.t_final * static_cast<double>(i) / static_cast<double>(t.samples));
  }
  return out;
}

double l2_distance(const Wavefunction& a, const Wavefunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.grid.cell_volume());
}

double max_amplitude(const Wavefunction& psi) {
  double m = 0.0;
  for (const auto& z : psi.values) m = std::max(m, std::abs(z));
  return m;
}

json blowup_json(const BlowupDiagnostic& d) {
  return {{"time", d.time_of_detection}, {"description", d.describe()}, {"norm_ratio", d.norm_ratio}};
}

ExperimentResult blown_up(ExperimentResult r, const BlowupDiagnostic& d) {
  r.verdict = Verdict::blowup;
  r.blowup = d;
  r.statistic = std::numeric_limits<double>::infinity();
  r.statistics["blowup"] = blowup_json(d);
  return r;
}

ExperimentResult linear_benchmark(const ExperimentConfig& c) {
  if (c.state.family != StateSpec::Family::gaussian || c.potential.kind != PotentialSpec::Kind::zero ||
      !c.coefficients.is_linear()) {
    throw ConfigError("kind", "linear_benchmark needs a gaussian state, zero potential and linear coefficients");
  }
  const Grid grid = c.grid.build();
  const auto ev = c.evolution(grid);
  Wavefunction psi = c.state.build(grid, c.seed);
  const double n0 = norm(psi);
  const double w0 = c.state.width;

  ExperimentResult r;
  r.series.columns = {"t", "width", "analytic_width", "relative_error", "norm", "energy"};
  double worst = 0.0;
  for (double t : sample_times(c.time)) {
    if (t > psi.time) psi = propagate_linear(psi, ev, t - psi.time);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
      const double x = grid.coordinate(0, i);
      const double rho = std::norm(psi.values[i]);
      m0 += rho;
      m1 += rho * x;
      m2 += rho * x * x;
    }
    const double mean = m1 / m0;
    const double width = std::sqrt(2.0 * (m2 / m0 - mean * mean));
    const double tau = t / (c.mass * w0 * w0);
    const double analytic = w0 * std::sqrt(1.0 + tau * tau);
    const double err = std::abs(width - analytic) / analytic;
    worst = std::max(worst, err);
    r.series.rows.push_back({t, width, analytic, err, norm(psi), energy(psi, c.mass, ev.potential)});
  }
  const double steps = std::ceil(c.time.t_final / c.time.dt - 1e-9);
  const double drift = std::abs(norm(psi) - n0) * 1000.0 / steps;
  r.statistic = worst;
  r.statistics = {{"max_relative_width_error", worst}, {"norm_drift_per_1000_steps", drift}, {"steps", steps}};
  r.verdict = (worst <= c.tolerances.width && drift <= c.tolerances.norm_drift) ? Verdict::pass : Verdict::fail;
  return r;
}

ExperimentResult linearizability(const ExperimentConfig& c) {
  const Grid grid = c.grid.build();
  EvolutionSpec nl = c.evolution(grid);
  if (c.perturb) {
    const std::size_t idx = CoefficientSet::index_of(c.perturb->coefficient);
    const double factor = c.perturb->factor;
    nl.dictionary = [idx, factor](double g, double gd, double m) {
      auto k = linearizable_coefficients(g, gd, m);
      k[idx] *= factor;
      return k;
    };
  }
  EvolutionSpec lin = nl;
  lin.gauge_schedule.reset();
  lin.dictionary = nullptr;
  lin.coefficients = CoefficientSet::linear();
  const auto& sched = *c.gauge_schedule;
  const auto& pol = nl.node_floor;

  const Wavefunction psi0 = c.state.build(grid, c.seed);
  Wavefunction a = psi0;
  Wavefunction b = invert_gauge(psi0, sched.gamma(0.0), pol);
  const double n0 = norm(psi0);

  ExperimentResult r;
  r.series.columns = {"t", "gamma", "residual", "norm", "energy"};
  double residual = 0.0;
  for (double t : sample_times(c.time)) {
    if (t > a.time) {
      const auto step = propagate(a, nl, t - a.time, n0);
      if (!step.ok()) return blown_up(std::move(r), step.blowup());
      a = step.state();
      b = propagate_linear(b, lin, t - b.time);
    }
    const auto mapped = apply_gauge(b, sched.gamma(t), pol);
    residual = l2_distance(a, mapped) / n0;
    r.series.rows.push_back({t, sched.gamma(t), residual, norm(a), energy(b, c.mass, lin.potential)});
  }
  r.statistic = residual;
  r.statistics = {{"final_residual", residual}};
  r.verdict = residual <= c.tolerances.residual ? Verdict::pass : Verdict::fail;
  return r;
}

ExperimentResult momentum_cone(const ExperimentConfig& c) {
  const Grid grid = c.grid.build();
  const Wavefunction psi = c.state.build(grid, c.seed);
  ExperimentResult r;
  r.series.columns = {"t"};
  std::vector<AsymptoticMomentumSeries> all;
  std::vector<double> fourier;
  for (std::size_t j = 0; j < c.momentum_regions.size(); ++j) {
    const auto& iv = c.momentum_regions[j];
    const auto region = Region::interval(iv.lo, iv.hi, Space::momentum);
    all.push_back(asymptotic_momentum_probability(psi, region, c.mass, c.time.times));
    fourier.push_back(fourier_momentum_probability(psi, region));
    r.series.columns.push_back("cone_" + std::to_string(j));
    r.series.columns.push_back("error_" + std::to_string(j));
  }
  for (std::size_t i = 0; i < c.time.times.size(); ++i) {
    std::vector<double> row{c.time.times[i]};
    for (std::size_t j = 0; j < all.size(); ++j) {
      row.push_back(all[j].probabilities[i]);
      row.push_back(std::abs(all[j].probabilities[i] - fourier[j]));
    }
    r.series.rows.push_back(std::move(row));
  }
  double worst = 0.0;
  bool approaching = true;
  json regions = json::array();
  for (std::size_t j = 0; j < all.size(); ++j) {
    const double first = std::abs(all[j].probabilities.front() - fourier[j]);
    const double err = std::abs(all[j].estimate - fourier[j]);
    worst = std::max(worst, err);
    const bool closer = err <= first;
    approaching = approaching && closer;
    regions.push_back({{"estimate", all[j].estimate},
                       {"fourier", fourier[j]},
                       {"error", err},
                       {"sequence_monotone", all[j].monotone},
                       {"approaching", closer},
                       {"leak_fraction", all[j].leak_fraction}});
  }
  r.statistic = worst;
  r.statistics = {{"max_error", worst}, {"approaching", approaching}, {"regions", regions}};
  r.verdict = (worst <= c.tolerances.cone && approaching) ? Verdict::pass : Verdict::fail;
  return r;
}

Mixture build_mixture(const std::vector<MixtureSpec::Component>& spec, const Grid& grid,
                      std::uint64_t seed) {
  std::vector<MixtureComponent> comps;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    comps.push_back({spec[i].weight, spec[i].state.build(grid, seed + i)});
  }
  return Mixture(std::move(comps));
}

Mixture eigen_unraveling(const Mixture& first) {
  const auto w = density_matrix(first);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(w.matrix);
  const auto& lambda = solver.eigenvalues();
  const double cutoff = 1e-13 * lambda.maxCoeff();
  const double scale = 1.0 / std::sqrt(w.grid.cell_volume());
  std::vector<MixtureComponent> comps;
  double total = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > cutoff) total += lambda(k);
  }
  for (Eigen::Index k = lambda.size() - 1; k >= 0; --k) {
    if (!(lambda(k) > cutoff)) continue;
    Wavefunction phi(w.grid);
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
      phi.values[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), k) * scale;
    }
    comps.push_back({lambda(k) / total, phi});
  }
  return Mixture(std::move(comps));
}

// chi'_k = sum_j U_kj sqrt(lambda_j) phi_j with U the Cayley transform of
// theta (J - I); the ensemble operator is unchanged by any unitary mixing.
Mixture rotated_unraveling(const Mixture& first, double theta) {
  const auto& comps = first.components();
  const auto n = static_cast<Eigen::Index>(comps.size());
  const Eigen::MatrixXcd h = theta * (Eigen::MatrixXcd::Ones(n, n) - Eigen::MatrixXcd::Identity(n, n));
  const Complex i1(0.0, 1.0);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd u = (id - i1 * h) * (id + i1 * h).inverse();
  std::vector<MixtureComponent> out;
  double total = 0.0;
  std::vector<std::pair<double, Wavefunction>> raw;
  for (Eigen::Index k = 0; k < n; ++k) {
    Wavefunction chi(first.grid());
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& c = comps[static_cast<std::size_t>(j)];
      const Complex f = u(k, j) * std::sqrt(c.weight);
      for (std::size_t i = 0; i < chi.values.size(); ++i) chi.values[i] += f * c.state.values[i];
    }
    const double nn = norm(chi);
    const double w = nn * nn;
    total += w;
    if (w > 0.0) raw.emplace_back(w, normalized(chi));
  }
  for (auto& [w, phi] : raw) out.push_back({w / total, std::move(phi)});
  return Mixture(std::move(out));
}

ExperimentResult run_mixture(const ExperimentConfig& c) {
  const Grid grid = c.grid.build();
  const auto& m = c.mixture;
  for (const auto& comp : m.first) {
    if (comp.state.family == StateSpec::Family::two_particle) throw ConfigError("mixture.first", "single-particle only");
  }
  const Mixture first = build_mixture(m.first, grid, c.seed);
  Mixture second = first;
  switch (m.unraveling) {
    case MixtureSpec::Unraveling::explicit_list:
      second = build_mixture(m.second, grid, c.seed + m.first.size());
      break;
    case MixtureSpec::Unraveling::eigen:
      second = eigen_unraveling(first);
      break;
    case MixtureSpec::Unraveling::rotated:
      second = rotated_unraveling(first, m.theta);
      break;
  }

  const EvolutionSpec ev = c.evolution(grid);
  std::vector<Effect> effects;
  for (double d : m.durations) {
    for (const auto& iv : m.regions) {
      effects.push_back({"T=" + format_double(d) + " B=[" + format_double(iv.lo) + "," + format_double(iv.hi) + ")",
                         ev, d, Region::interval(iv.lo, iv.hi)});
    }
  }

  ExperimentResult r;
  r.series.columns = {"effect", "duration", "lo", "hi", "gap"};
  Distinguishability dist;
  try {
    dist = mixtures_distinguishable(first, second, effects, c.tolerances.gap);
    for (std::size_t i = 0; i < effects.size(); ++i) {
      const auto& box = effects[i].region.boxes().front().front();
      r.series.rows.push_back({static_cast<double>(i), effects[i].duration, box.lo, box.hi, dist.gaps[i]});
    }
  } catch (const BlowupError& e) {
    return blown_up(std::move(r), e.diagnostic());
  }

  double w_diff = std::numeric_limits<double>::quiet_NaN();
  if (grid.size() <= kMaxDensityMatrixPoints) {
    w_diff = (density_matrix(first).matrix - density_matrix(second).matrix).cwiseAbs().maxCoeff();
  }
  r.statistic = dist.gap;
  r.statistics = {{"gap", dist.gap},
                  {"distinguishable", dist.distinguishable},
                  {"family_size", dist.family_size},
                  {"density_matrix_difference", w_diff},
                  {"second_components", second.components().size()},
                  {"expect", m.expect}};
  if (dist.witness) r.statistics["witness"] = effects[*dist.witness].label;
  r.statistics["verdict_scope"] = "relative to the sampled effect family";
  const bool want = m.expect == "distinguishable";
  r.verdict = dist.distinguishable == want ? Verdict::pass : Verdict::fail;
  return r;
}

ExperimentResult gisin(const ExperimentConfig& c) {
  const Grid grid = c.grid.build();
  const Grid line0 = axis_grid(grid, 0);
  const Grid line1 = axis_grid(grid, 1);
  TwoParticleSpec spec{grid, c.potential.build(line0, c.mass), c.gisin.remote.build(line1, c.mass),
                       c.state.build(grid, c.seed), c.evolution(grid)};
  std::vector<std::vector<double>> v2s{spec.v2};
  for (const auto& p : c.gisin.variants) v2s.push_back(p.build(line1, c.mass));

  std::vector<Region> regions;
  for (const auto& iv : c.gisin.regions) regions.push_back(Region::interval(iv.lo, iv.hi));
  std::vector<std::vector<double>> weights;
  for (const auto& rg : regions) weights.push_back(rg.weights(line0));
  auto marginals = [&](const Wavefunction& psi) {
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

  ExperimentResult r;
  r.series.columns = {"t", "statistic", "norm"};
  for (std::size_t j = 0; j < regions.size(); ++j) r.series.columns.push_back("baseline_" + std::to_string(j));

  std::vector<Wavefunction> states(v2s.size(), spec.initial);
  const double n0 = norm(spec.initial);
  double statistic = 0.0;
  for (double t : sample_times(c.time)) {
    if (t > states.front().time) {
      std::vector<std::future<PropagationResult>> runs;
      for (std::size_t v = 0; v < v2s.size(); ++v) {
        runs.push_back(std::async(std::launch::async, [&, v, t] {
          TwoParticleSpec s = spec;
          s.initial = states[v];
          return evolve_two_particle(s, v2s[v], t - states[v].time, n0);
        }));
      }
      std::vector<PropagationResult> results;
      for (auto& f : runs) results.push_back(f.get());
      for (std::size_t v = 0; v < results.size(); ++v) {
        if (!results[v].ok()) return blown_up(std::move(r), results[v].blowup());
        states[v] = results[v].state();
      }
    }
    const auto base = marginals(states.front());
    statistic = 0.0;
    for (std::size_t v = 1; v < states.size(); ++v) {
      const auto p = marginals(states[v]);
      for (std::size_t j = 0; j < p.size(); ++j) statistic = std::max(statistic, std::abs(p[j] - base[j]));
    }
    std::vector<double> row{t, statistic, norm(states.front())};
    row.insert(row.end(), base.begin(), base.end());
    r.series.rows.push_back(std::move(row));
  }

  r.statistic = statistic;
  r.statistics = {{"statistic", statistic}, {"entangled", is_entangled(spec.initial)}, {"expect", c.gisin.expect}};

  bool factor_ok = true;
  if (c.state.pairing == StateSpec::Pairing::product) {
    EvolutionSpec ev1 = spec.evolution;
    ev1.potential = spec.v1;
    EvolutionSpec ev2 = spec.evolution;
    ev2.potential = spec.v2;
    const auto a = propagate(c.state.first->build(line0, c.seed), ev1, c.time.t_final);
    const auto b = propagate(c.state.second->build(line1, c.seed + 1), ev2, c.time.t_final);
    if (!a.ok()) return blown_up(std::move(r), a.blowup());
    if (!b.ok()) return blown_up(std::move(r), b.blowup());
    const double residual = l2_distance(tensor_product(a.state(), b.state()), states.front()) / norm(spec.initial);
    r.statistics["factorization_residual"] = residual;
    factor_ok = residual <= c.tolerances.factorization;
  }

  const auto& expect = c.gisin.expect;
  bool pass = true;
  if (expect == "no_signaling") pass = statistic <= c.tolerances.signaling && factor_ok;
  if (expect == "signaling") pass = statistic > c.tolerances.signaling;
  r.verdict = pass ? Verdict::pass : Verdict::fail;
  return r;
}

ExperimentResult blowup_scan(const ExperimentConfig& c) {
  const Grid grid = c.grid.build();
  const auto ev = c.evolution(grid);
  Wavefunction psi = c.state.build(grid, c.seed);
  const double n0 = norm(psi);
  ExperimentResult r;
  r.series.columns = {"t", "norm", "max_amplitude", "energy"};
  for (double t : sample_times(c.time)) {
    if (t > psi.time) {
      const auto step = propagate(psi, ev, t - psi.time, n0);
      if (!step.ok()) return blown_up(std::move(r), step.blowup());
      psi = step.state();
    }
    r.series.rows.push_back({t, norm(psi), max_amplitude(psi), energy(psi, c.mass, ev.potential)});
  }
  r.statistic = norm(psi) / n0;
  r.statistics = {{"final_norm_ratio", r.statistic}};
  r.verdict = Verdict::pass;
  return r;
}

}  // namespace

ExperimentResult execute(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::linear_benchmark: return linear_benchmark(config);
    case ExperimentKind::linearizability: return linearizability(config);
    case ExperimentKind::momentum_cone: return momentum_cone(config);
    case ExperimentKind::mixture_distinguishability: return run_mixture(config);
    case ExperimentKind::gisin_signaling: return gisin(config);
    case ExperimentKind::blowup_scan: return blowup_scan(config);
  }
  throw ConfigError("kind", "unsupported experiment kind");
}

// ---------------------------------------------------------------------------
// Parameters and files

ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& path, double value) {
  json j = to_json(config);
  json* node = &j;
  std::istringstream in(path);
  std::string segment;
  while (std::getline(in, segment, '.')) {
    if (segment.empty()) throw ConfigError(path, "empty path segment");
    if (node->is_object()) {
      if (!node->contains(segment)) throw ConfigError(path, "no such field");
      node = &(*node)[segment];
    } else if (node->is_array()) {
      if (segment.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError(path, "array index expected at '" + segment + "'");
      }
      const auto idx = std::stoul(segment);
      if (idx >= node->size()) throw ConfigError(path, "index out of range");
      node = &(*node)[idx];
    } else {
      throw ConfigError(path, "path descends into a scalar");
    }
  }
  if (!node->is_number()) throw ConfigError(path, "sweep target must be a numeric scalar");
  if (!std::isfinite(value)) throw ConfigError(path, "sweep value must be finite");
  if (node->is_number_integer()) {
    if (value != std::floor(value) || value < 0) throw ConfigError(path, "integer field needs a nonnegative integer");
    *node = static_cast<std::uint64_t>(value);
  } else {
    *node = value;
  }
  return parse_config(j.dump(2));
}

namespace {

struct Outputs {
  fs::path json_path, csv_path, gp_path;
};

Outputs output_paths(const fs::path& dir, const std::string& stem) {
  return {dir / (stem + ".json"), dir / (stem + ".csv"), dir / (stem + ".gp")};
}

std::string gnuplot_script(const SeriesTable& s, const std::string& csv_name, const std::string& title) {
  std::ostringstream g;
  g << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set title '" << title << "'\n"
    << "set xlabel '" << (s.columns.empty() ? "" : s.columns.front()) << "'\n"
    << "plot for [i=2:" << s.columns.size() << "] '" << csv_name << "' using 1:i with linespoints\n";
  return g.str();
}

void write_result(const ExperimentConfig& config, const ExperimentResult& result, const Outputs& out,
                  const std::string& input_bytes, double seconds) {
  const std::string canonical = serialize_config(config);
  json rec;
  rec["kind"] = to_string(config.kind);
  rec["config_hash"] = sha256_hex(canonical);
  rec["input_digest"] = git_blob_sha1(input_bytes);
  rec["seed"] = config.seed;
  rec["verdict"] = to_string(result.verdict);
  rec["statistic"] = format_double(result.statistic);
  rec["statistics"] = result.statistics;
  rec["series_file"] = out.csv_path.filename().string();
  rec["columns"] = result.series.columns;
  rec["wall_clock_seconds"] = seconds;
  rec["config"] = to_json(config);
  write_atomic(out.csv_path, result.series.to_csv());
  write_atomic(out.gp_path, gnuplot_script(result.series, out.csv_path.filename().string(), to_string(config.kind)));
  write_atomic(out.json_path, rec.dump(2) + "\n");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot read config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem_for(const ExperimentConfig& c, const std::string& path) {
  return c.output.prefix.empty() ? fs::path(path).stem().string() : c.output.prefix;
}

bool prepare_dir(const fs::path& dir, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    log << "error: cannot create output directory " << dir.string() << "\n";
    return false;
  }
  const fs::path probe = dir / (".nlqm_probe." + std::to_string(::getpid()));
  {
    std::ofstream p(probe);
    if (!p) {
      log << "error: output directory " << dir.string() << " is not writable\n";
      return false;
    }
  }
  fs::remove(probe, ec);
  return true;
}

struct Timed {
  ExperimentResult result;
  double seconds;
};

Timed timed_execute(const ExperimentConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  auto r = execute(c);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(r), s};
}

}  // namespace

int run_command(const std::string& config_path, const RunOptions& options, std::ostream& log) {
  ExperimentConfig config;
  std::string bytes;
  try {
    bytes = read_file(config_path);
    config = parse_config(bytes);
  } catch (const ConfigurationError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const fs::path dir = options.out_dir ? *options.out_dir : config.output.dir;
  Timed t;
  try {
    t = timed_execute(config);
  } catch (const ConfigurationError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BoxTooSmallError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (!prepare_dir(dir, log)) return kExitConfig;
  try {
    write_result(config, t.result, output_paths(dir, stem_for(config, config_path)), bytes, t.seconds);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  log << to_string(config.kind) << ": " << to_string(t.result.verdict)
      << " (statistic = " << format_double(t.result.statistic) << ")\n";
  if (t.result.blowup) log << t.result.blowup->describe() << "\n";
  return exit_code(t.result.verdict);
}

int sweep_command(const std::string& config_path, const std::string& parameter,
                  const std::vector<double>& values, const RunOptions& options, std::ostream& log) {
  if (values.empty()) {
    log << "config error: sweep needs at least one value\n";
    return kExitConfig;
  }
  ExperimentConfig base;
  std::vector<ExperimentConfig> members;
  try {
    base = parse_config(read_file(config_path));
    for (double v : values) members.push_back(with_parameter(base, parameter, v));
  } catch (const ConfigurationError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const fs::path dir = options.out_dir ? *options.out_dir : base.output.dir;
  if (!prepare_dir(dir, log)) return kExitConfig;
  const std::string stem = stem_for(base, config_path);

  std::vector<std::optional<Timed>> results(members.size());
  std::vector<std::string> errors(members.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < members.size(); i = next++) {
      try {
        results[i] = timed_execute(members[i]);
        const std::string bytes = serialize_config(members[i]);
        write_result(members[i], results[i]->result, output_paths(dir, stem + "_" + std::to_string(i)), bytes,
                     results[i]->seconds);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(options.workers, members.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  int code = kExitPass;
  std::string csv = "index,value,verdict,statistic,ratio\n";
  json summary;
  summary["parameter"] = parameter;
  summary["values"] = values;
  summary["members"] = json::array();
  std::vector<double> stats;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!results[i]) {
      log << "member " << i << ": error: " << errors[i] << "\n";
      code = kExitConfig;
      continue;
    }
    const auto& r = results[i]->result;
    const double prev = stats.empty() ? std::numeric_limits<double>::quiet_NaN() : stats.back();
    stats.push_back(r.statistic);
    csv += std::to_string(i) + "," + format_double(values[i]) + "," + to_string(r.verdict) + "," +
           format_double(r.statistic) + "," + format_double(prev / r.statistic) + "\n";
    summary["members"].push_back({{"value", values[i]}, {"verdict", to_string(r.verdict)},
                                  {"statistic", format_double(r.statistic)},
                                  {"result_file", stem + "_" + std::to_string(i) + ".json"}});
    log << parameter << " = " << format_double(values[i]) << ": " << to_string(r.verdict)
        << " (statistic = " << format_double(r.statistic) << ")\n";
    if (code != kExitConfig) {
      if (r.verdict == Verdict::blowup) code = kExitBlowup;
      else if (r.verdict == Verdict::fail && code == kExitPass) code = kExitFail;
    }
  }
  const bool monotone = std::is_sorted(stats.begin(), stats.end()) || std::is_sorted(stats.rbegin(), stats.rend());
  summary["statistic_monotone"] = monotone;
  try {
    write_atomic(dir / "summary.csv", csv);
    write_atomic(dir / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  log << "statistic " << (monotone ? "monotone" : "not monotone") << " in " << parameter << "\n";
  return code;
}

}  // namespace nlqm
