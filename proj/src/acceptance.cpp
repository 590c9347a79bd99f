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

#include "nlqm/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "nlqm/config.hpp"
#include "nlqm/field_core.hpp"
#include "nlqm/functionals.hpp"
#include "nlqm/gauge.hpp"
#include "nlqm/observables.hpp"

namespace nlqm::acceptance {
namespace {

using json = nlohmann::json;

// Pinned tolerances.
constexpr double kWidthTol = 1e-6;
constexpr double kDriftTol = 1e-12;
constexpr double kGaugeTol = 1e-12;
constexpr double kResidualTol = 1e-4;
constexpr double kRatioLo = 3.0;
constexpr double kRatioHi = 5.0;
constexpr double kSensitivityTol = 1e-3;
constexpr double kConeTol = 2e-3;
constexpr double kLinearGapTol = 1e-10;
constexpr double kNonlinearGapTol = 1e-3;
constexpr double kLinearSignalTol = 1e-10;
constexpr double kProductSignalTol = 1e-6;
constexpr double kFactorizationTol = 1e-5;
constexpr double kIdempotencyTol = 1e-10;
constexpr double kFunctionalTol = 1e-8;

// An entangled statistic counts as converged in dt when the two finest
// steps agree to this relative spread.
constexpr double kDtSpreadTol = 1e-2;

std::string num(double v) { return format_double(v); }

ExperimentResult run_json(const json& j) { return execute(parse_config(j.dump())); }

double l2_diff(const Wavefunction& a, const Wavefunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.grid.cell_volume());
}

double max_abs_diff(const Wavefunction& a, const Wavefunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

// Smooth random state: Gaussian envelope times a few random Fourier modes.
Wavefunction random_state(const Grid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double length = grid.axis(0).length;
  const double center = 0.2 * length * u(rng);
  const double width = length * (0.06 + 0.04 * (u(rng) + 1.0));
  std::vector<Complex> modes(6);
  for (auto& c : modes) c = {u(rng), u(rng)};
  Wavefunction psi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unravel(i);
    double r2 = 0.0;
    Complex f = 1.0;
    for (std::size_t a = 0; a < grid.dim(); ++a) {
      const double x = grid.coordinate(a, idx[a]);
      const double d = x - (a == 0 ? center : -center);
      r2 += d * d;
      for (std::size_t m = 0; m < modes.size(); ++m) {
        const double k = 2.0 * std::numbers::pi * static_cast<double>(m + 1) / length;
        f += 0.3 * modes[m] * std::exp(Complex{0.0, k * x});
      }
    }
    psi.values[i] = std::exp(-r2 / (2.0 * width * width)) * f;
  }
  return normalized(psi);
}

Region random_region(const Grid& grid, std::mt19937_64& rng, Space space) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double extent = space == Space::position
                            ? grid.axis(0).length
                            : 2.0 * std::numbers::pi / grid.axis(0).spacing();
  auto interval = [&] {
    double a = (u(rng) - 0.5) * 0.8 * extent;
    double b = (u(rng) - 0.5) * 0.8 * extent;
    if (a > b) std::swap(a, b);
    return Interval{a, b + 1e-3 * extent};
  };
  if (grid.dim() == 1) {
    const auto i = interval();
    return Region::interval(i.lo, i.hi, space);
  }
  return Region::box(interval(), interval(), space);
}

// ---------------------------------------------------------------------------
// 1. Linear correctness

CriterionResult linear_correctness() {
  const json cfg = {{"kind", "linear_benchmark"},
                    {"grid", {{"points", 1024}, {"length", 80}}},
                    {"mass", 1.0},
                    {"state", {{"family", "gaussian"}, {"center", 0}, {"width", 1.0}, {"k0", 0}}},
                    {"time", {{"t_final", 2.0}, {"dt", 1e-3}, {"samples", 20}}},
                    {"tolerances", {{"width", kWidthTol}, {"norm_drift", kDriftTol}}}};
  const auto r = run_json(cfg);
  const double width = r.statistics.at("max_relative_width_error");
  const double drift = r.statistics.at("norm_drift_per_1000_steps");
  CriterionResult out{1, "linear correctness", width <= kWidthTol && drift <= kDriftTol, {}};
  out.detail = "max width error " + num(width) + ", norm drift per 1000 steps " + num(drift);
  return out;
}

// ---------------------------------------------------------------------------
// 2. Gauge-map properties

CriterionResult gauge_properties() {
  std::mt19937_64 rng(20260201);
  std::uniform_real_distribution<double> g(-2.0, 2.0);
  const NodeFloorPolicy floor;
  double modulus = 0.0;
  double composition = 0.0;
  double born = 0.0;
  for (int trial = 0; trial < 32; ++trial) {
    const Grid grid = trial % 4 == 3 ? Grid::plane({32, 16.0}, {32, 16.0}) : Grid::line(256, 30.0);
    const auto psi = random_state(grid, rng);
    const double g1 = g(rng);
    const double g2 = g(rng);
    const auto region = random_region(grid, rng, Space::position);
    const auto mapped = apply_gauge(psi, g1, floor);
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
      modulus = std::max(modulus, std::abs(std::abs(mapped.values[i]) - std::abs(psi.values[i])));
    }
    const auto twice = apply_gauge(apply_gauge(psi, g2, floor), g1, floor);
    composition = std::max(composition, max_abs_diff(twice, apply_gauge(psi, g1 + g2, floor)));
    born = std::max(born, std::abs(born_probability(mapped, region) - born_probability(psi, region)));
  }
  CriterionResult out{2, "gauge-map properties",
                      modulus <= kGaugeTol && composition <= kGaugeTol && born <= kGaugeTol, {}};
  out.detail = "32 triples: modulus " + num(modulus) + ", composition " + num(composition) +
               ", born " + num(born);
  return out;
}

// ---------------------------------------------------------------------------
// 3 and 4. Linearizability and its sensitivity

struct LinearizabilitySetup {
  ExperimentConfig config;
  Grid grid;
  Wavefunction psi0;
};

LinearizabilitySetup linearizability_setup() {
  const double k0 = 2.0 * std::numbers::pi * 3.0 / 40.0;
  const json cfg = {{"kind", "linearizability"},
                    {"grid", {{"points", 512}, {"length", 40}}},
                    {"mass", 1.0},
                    {"state", {{"family", "gaussian"}, {"center", 0}, {"width", 0.7}, {"k0", k0}}},
                    {"potential", {{"kind", "harmonic"}, {"omega", 0.5}}},
                    {"gauge_schedule", {{"constant", 0.4}}},
                    {"time", {{"t_final", 0.5}, {"dt", 1e-3}}},
                    {"node_floor", 1e-14}};
  LinearizabilitySetup s{parse_config(cfg.dump()), {}, {}};
  s.grid = s.config.grid.build();
  s.psi0 = s.config.state.build(s.grid, s.config.seed);
  return s;
}

// || U_nl(t) psi0 - N_{gamma_t} U_lin(t) N_{gamma_0}^-1 psi0 || / ||psi0||, t = 0.5.
double linearizability_residual(const LinearizabilitySetup& s, const GaugeSchedule& schedule,
                                double dt, const CoefficientDictionary& dictionary) {
  EvolutionSpec nl = s.config.evolution(s.grid);
  nl.gauge_schedule = schedule;
  nl.dictionary = dictionary;
  nl.dt = dt;
  EvolutionSpec lin = nl;
  lin.gauge_schedule.reset();
  lin.dictionary = nullptr;
  const double t = 0.5;
  const auto a = propagate(s.psi0, nl, t);
  if (!a.ok()) return std::numeric_limits<double>::infinity();
  const auto b = propagate_linear(invert_gauge(s.psi0, schedule.gamma(0.0), nl.node_floor), lin, t);
  return l2_diff(a.state(), apply_gauge(b, schedule.gamma(t), nl.node_floor)) / norm(s.psi0);
}

GaugeSchedule ramp() { return GaugeSchedule::piecewise_linear({{0.0, 0.2}, {0.25, 0.7}, {0.5, 0.4}}); }

CriterionResult linearizability(const Options& options) {
  const auto setup = linearizability_setup();
  std::vector<std::pair<std::string, GaugeSchedule>> cases;
  for (double g : {0.2, 0.4, 0.8}) cases.emplace_back("gamma=" + num(g), GaugeSchedule::constant(g));
  cases.emplace_back("ramp", ramp());
  CriterionResult out{3, "linearizability", true, {}};
  std::ostringstream d;
  for (const auto& [label, sched] : cases) {
    const double coarse = linearizability_residual(setup, sched, 1e-3, options.dictionary);
    const double fine = linearizability_residual(setup, sched, 5e-4, options.dictionary);
    const double ratio = coarse / fine;
    const bool ok = coarse <= kResidualTol && ratio >= kRatioLo && ratio <= kRatioHi;
    out.pass = out.pass && ok;
    d << (d.tellp() > 0 ? "; " : "") << label << " residual " << num(coarse) << " ratio " << num(ratio);
  }
  out.detail = d.str();
  return out;
}

CriterionResult sensitivity(const Options& options) {
  const auto setup = linearizability_setup();
  const CoefficientDictionary base = options.dictionary ? options.dictionary : linearizable_coefficients;
  CriterionResult out{4, "perturbation sensitivity", true, {}};
  std::ostringstream d;
  double weakest = std::numeric_limits<double>::infinity();
  std::string weakest_name;
  for (const char* name : {"nu2", "mu0", "mu1", "mu2", "mu4", "mu5", "alpha1"}) {
    const std::size_t idx = CoefficientSet::index_of(name);
    const CoefficientDictionary perturbed = [base, idx](double g, double gd, double m) {
      auto c = base(g, gd, m);
      c[idx] *= 1.1;
      return c;
    };
    const double r = linearizability_residual(setup, ramp(), 1e-3, perturbed);
    if (!(r > kSensitivityTol)) out.pass = false;
    if (r < weakest) {
      weakest = r;
      weakest_name = name;
    }
  }
  out.detail = "7 coefficients x1.1, smallest residual " + num(weakest) + " (" + weakest_name + ")";
  return out;
}

// ---------------------------------------------------------------------------
// 5. Velocity-cone momentum

CriterionResult velocity_cone_momentum() {
  struct Packet {
    double center, width, k0;
  };
  const std::vector<Packet> packets = {{0.0, 1.5, 0.5}, {0.0, 2.0, -0.3}, {0.0, 1.2, 1.0}};
  CriterionResult out{5, "velocity-cone momentum", true, {}};
  double worst = 0.0;
  bool approaching = true;
  for (const auto& p : packets) {
    const json cfg = {
        {"kind", "momentum_cone"},
        {"grid", {{"points", 1024}, {"length", 567.1335974706363}}},
        {"mass", 1.0},
        {"state", {{"family", "gaussian"}, {"center", p.center}, {"width", p.width}, {"k0", p.k0}}},
        {"time", {{"times", {5, 10, 20, 30, 40, 50}}}},
        {"momentum_regions", {{nullptr, 0}, {0, 0.5}, {0.5, 1.0}, {1.0, nullptr}}},
        {"tolerances", {{"cone", kConeTol}}}};
    const auto r = run_json(cfg);
    worst = std::max(worst, static_cast<double>(r.statistics.at("max_error")));
    approaching = approaching && r.statistics.at("approaching").get<bool>();
  }
  out.pass = worst <= kConeTol && approaching;
  out.detail = "3 packets x 4 regions at t=50: max error " + num(worst) +
               (approaching ? ", every sequence approaching" : ", some sequence not approaching");
  return out;
}

// ---------------------------------------------------------------------------
// 6. Mixture dichotomy

json pedestal_state(double center) {
  return {{"family", "superposition"},
          {"terms",
           {{{"coefficient", {0.3, 0}}, {"state", {{"family", "plane_wave"}, {"k0", 0}}}},
            {{"coefficient", {1, 0}},
             {"state", {{"family", "gaussian"}, {"center", center}, {"width", 1.0}}}}}}};
}

json mixture_config(bool nonlinear, const std::string& unraveling) {
  json regions = json::array();
  for (int j = 0; j < 15; ++j) regions.push_back({-11.25 + 1.5 * j, -9.75 + 1.5 * j});
  json cfg = {{"kind", "mixture_distinguishability"},
              {"grid", {{"points", 256}, {"length", 24}}},
              {"mass", 0.5},
              {"coefficients", nonlinear ? json{{"mu2", 0.3}} : json::object()},
              {"mixture",
               {{"first",
                 {{{"weight", 0.5}, {"state", pedestal_state(-1.0)}},
                  {{"weight", 0.5}, {"state", pedestal_state(1.0)}}}},
                {"unraveling", unraveling},
                {"durations", {1.0 / 6.0, 1.0 / 3.0, 0.5}},
                {"regions", regions},
                {"expect", nonlinear ? "distinguishable" : "indistinguishable"}}},
              {"time", {{"t_final", 0.5}, {"dt", 5e-4}}},
              {"tolerances", {{"gap", nonlinear ? kNonlinearGapTol : kLinearGapTol}}}};
  return cfg;
}

CriterionResult mixture_dichotomy() {
  CriterionResult out{6, "mixture dichotomy", true, {}};
  std::ostringstream d;
  double linear_gap = 0.0;
  for (const char* u : {"eigen", "rotated"}) {
    const auto r = run_json(mixture_config(false, u));
    linear_gap = std::max(linear_gap, r.statistic);
  }
  const auto nl = run_json(mixture_config(true, "rotated"));
  const bool witnessed = nl.statistics.contains("witness");
  out.pass = linear_gap <= kLinearGapTol && nl.verdict == Verdict::pass && nl.statistic > kNonlinearGapTol &&
             witnessed;
  d << "linear gap " << num(linear_gap) << " (eigen and rotated); mu2=0.3 gap " << num(nl.statistic);
  if (witnessed) d << ", witness " << nl.statistics.at("witness").get<std::string>();
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 7. Signaling dichotomy

json gisin_config(const std::string& pairing, bool nonlinear, std::size_t points, double dt,
                  const std::string& expect, double signaling_tol) {
  return {{"kind", "gisin_signaling"},
          {"grid", {{"dims", 2}, {"points", points}, {"length", 24}}},
          {"mass", 0.5},
          {"coefficients", nonlinear ? json{{"mu2", 0.3}} : json::object()},
          {"state",
           {{"family", "two_particle"},
            {"pairing", pairing},
            {"first", pedestal_state(-3.0)},
            {"second", pedestal_state(3.0)}}},
          {"gisin",
           {{"remote", {{"kind", "zero"}}},
            {"variants",
             {{{"kind", "table"}, {"points", {{1, 0}, {3, 1}, {5, 0}}}},
              {{"kind", "table"}, {"points", {{2, 0}, {3, -2}, {4, 0}}}}}},
            {"regions", {{nullptr, 0}, {-4.5, -1.5}, {-1.5, 1.5}}},
            {"expect", expect}}},
          {"time", {{"t_final", 1.0}, {"dt", dt}, {"samples", 4}}},
          {"tolerances", {{"signaling", signaling_tol}, {"factorization", kFactorizationTol}}}};
}

CriterionResult signaling_dichotomy() {
  CriterionResult out{7, "signaling dichotomy", true, {}};
  std::ostringstream d;

  const auto linear = run_json(gisin_config("entangled", false, 64, 2e-3, "no_signaling", kLinearSignalTol));
  const auto product = run_json(gisin_config("product", true, 64, 1e-3, "no_signaling", kProductSignalTol));
  const bool linear_ok = linear.verdict == Verdict::pass && linear.statistic <= kLinearSignalTol;
  const double factorization = product.statistics.value("factorization_residual", 1.0);
  const bool product_ok = product.verdict == Verdict::pass && product.statistic <= kProductSignalTol &&
                          factorization <= kFactorizationTol;
  d << "linear entangled " << num(linear.statistic) << "; product mu2=0.3 " << num(product.statistic)
    << " (factorization " << num(factorization) << ")";

  std::vector<double> stats;
  bool finite = true;
  d << "; entangled mu2=0.3 at 128^2:";
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const auto r = run_json(gisin_config("entangled", true, 128, dt, "measure", kLinearSignalTol));
    finite = finite && r.verdict != Verdict::blowup && std::isfinite(r.statistic);
    stats.push_back(r.statistic);
    d << " dt=" << num(dt) << " " << num(r.statistic);
  }
  const double spread = std::abs(stats[2] - stats[1]) / std::abs(stats[2]);
  d << " (finest spread " << num(spread) << ")";
  const bool entangled_ok = finite && stats.back() > kProductSignalTol && spread <= kDtSpreadTol;
  out.pass = linear_ok && product_ok && entangled_ok;
  out.detail = d.str();
  return out;
}

// ---------------------------------------------------------------------------
// 8. Generalized projections

CriterionResult generalized_projections() {
  std::mt19937_64 rng(20260208);
  std::uniform_real_distribution<double> g(-2.0, 2.0);
  std::bernoulli_distribution coin(0.5);
  const NodeFloorPolicy floor;
  double idempotency = 0.0;
  double reduction = 0.0;
  for (int trial = 0; trial < 16; ++trial) {
    const Grid grid = trial % 4 == 3 ? Grid::plane({32, 16.0}, {32, 16.0}) : Grid::line(256, 30.0);
    const auto psi = random_state(grid, rng);
    ProjectionSpec p = ProjectionSpec::identity();
    switch (trial % 3) {
      case 0: p = ProjectionSpec::position(random_region(grid, rng, Space::position)); break;
      case 1: p = ProjectionSpec::momentum_band(random_region(grid, rng, Space::momentum)); break;
      default: {
        std::vector<double> m(grid.size());
        for (auto& v : m) v = coin(rng) ? 1.0 : 0.0;
        p = ProjectionSpec::diagonal(trial % 2 ? Space::position : Space::momentum, std::move(m));
      }
    }
    const double gamma = g(rng);
    const auto once = generalized_projection(psi, p, gamma, floor);
    const auto twice = generalized_projection(once, p, gamma, floor);
    idempotency = std::max(idempotency, l2_diff(twice, once) / norm(psi));
    reduction = std::max(reduction, max_abs_diff(generalized_projection(psi, p, 0.0, floor),
                                                  apply_projection(psi, p)));
  }
  CriterionResult out{8, "generalized projections", idempotency <= kIdempotencyTol && reduction == 0.0, {}};
  out.detail = "16 triples: idempotency " + num(idempotency) + ", gamma=0 reduction " + num(reduction);
  return out;
}

// ---------------------------------------------------------------------------
// 9. Functional correctness

// Periodized exp(-|x-c|^2 / 2w^2 + i k x_0) against the single-image closed
// forms, compared where |x_a| <= L/4.
double functional_error(const Grid& grid, double width, double k, double amplitude_floor) {
  const double length = grid.axis(0).length;
  Wavefunction psi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unravel(i);
    double env = 1.0;
    for (std::size_t a = 0; a < grid.dim(); ++a) {
      const double x = grid.coordinate(a, idx[a]);
      double s = 0.0;
      for (int n = -3; n <= 3; ++n) {
        const double u = x + n * length;
        s += std::exp(-u * u / (2.0 * width * width));
      }
      env *= s;
    }
    psi.values[i] = (env + amplitude_floor) * std::exp(Complex{0.0, k * grid.coordinate(0, idx[0])});
  }
  const auto f = evaluate_all(psi, NodeFloorPolicy{});
  const double w2 = width * width;
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unravel(i);
    bool inside = true;
    double r2 = 0.0;
    double lap = 0.0;
    for (std::size_t a = 0; a < grid.dim(); ++a) {
      const double x = grid.coordinate(a, idx[a]);
      inside = inside && std::abs(x) <= 0.25 * length;
      r2 += x * x;
      lap += 4.0 * x * x / (w2 * w2) - 2.0 / w2;
    }
    if (!inside) continue;
    const double dlog_x = -2.0 * grid.coordinate(0, idx[0]) / w2;  // d_x rho / rho
    const double expected[6] = {k * dlog_x, lap, k * k, k * dlog_x, 4.0 * r2 / (w2 * w2), -r2 / w2};
    const double got[6] = {f.r1[i], f.r2[i], f.r3[i], f.r4[i], f.r5[i], f.log[i]};
    for (int j = 0; j < 6; ++j) worst = std::max(worst, std::abs(got[j] - expected[j]));
  }
  return worst;
}

// Plane wave A exp(i k.x): R3 = |k|^2, LOG = 2 ln A, all others zero.
double plane_wave_error(const Grid& grid, int m0, int m1, double amplitude) {
  const double k0 = 2.0 * std::numbers::pi * m0 / grid.axis(0).length;
  const double k1 = grid.dim() > 1 ? 2.0 * std::numbers::pi * m1 / grid.axis(1).length : 0.0;
  Wavefunction psi(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unravel(i);
    double phase = k0 * grid.coordinate(0, idx[0]);
    if (grid.dim() > 1) phase += k1 * grid.coordinate(1, idx[1]);
    psi.values[i] = amplitude * std::exp(Complex{0.0, phase});
  }
  const auto f = evaluate_all(psi, NodeFloorPolicy{});
  const double expected[6] = {0.0, 0.0, k0 * k0 + k1 * k1, 0.0, 0.0, 2.0 * std::log(amplitude)};
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double got[6] = {f.r1[i], f.r2[i], f.r3[i], f.r4[i], f.r5[i], f.log[i]};
    for (int j = 0; j < 6; ++j) worst = std::max(worst, std::abs(got[j] - expected[j]));
  }
  return worst;
}

CriterionResult functional_correctness() {
  const double k = 2.0 * std::numbers::pi * 4.0 / 40.0;
  const double gauss_1d = functional_error(Grid::line(512, 40.0), 4.0, k, 0.0);
  const double gauss_2d = functional_error(Grid::plane({128, 40.0}, {128, 40.0}), 4.0, k, 0.0);
  const double wave_1d = plane_wave_error(Grid::line(256, 20.0), 5, 0, 0.8);
  const double wave_2d = plane_wave_error(Grid::plane({64, 20.0}, {64, 20.0}), 3, -2, 1.3);
  const double worst = std::max({gauss_1d, gauss_2d, wave_1d, wave_2d});
  CriterionResult out{9, "functional correctness", worst <= kFunctionalTol, {}};
  out.detail = "gaussian 1d " + num(gauss_1d) + ", 2d " + num(gauss_2d) + "; plane wave 1d " + num(wave_1d) +
               ", 2d " + num(wave_2d);
  return out;
}

const char* criterion_name(int id) {
  static const char* names[] = {"",
                                "linear correctness",
                                "gauge-map properties",
                                "linearizability",
                                "perturbation sensitivity",
                                "velocity-cone momentum",
                                "mixture dichotomy",
                                "signaling dichotomy",
                                "generalized projections",
                                "functional correctness"};
  return id >= 1 && id <= kCriterionCount ? names[id] : "unknown";
}

}  // namespace

CriterionResult run_criterion(int id, const Options& options) {
  try {
    switch (id) {
      case 1: return linear_correctness();
      case 2: return gauge_properties();
      case 3: return linearizability(options);
      case 4: return sensitivity(options);
      case 5: return velocity_cone_momentum();
      case 6: return mixture_dichotomy();
      case 7: return signaling_dichotomy();
      case 8: return generalized_projections();
      case 9: return functional_correctness();
      default: break;
    }
  } catch (const std::exception& e) {
    return {id, criterion_name(id), false, std::string("error: ") + e.what()};
  }
  throw DomainError("no acceptance criterion " + std::to_string(id));
}

std::vector<CriterionResult> run_all(const Options& options, std::ostream& out) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!options.only.empty() && !options.only.count(id)) continue;
    results.push_back(run_criterion(id, options));
    out << format_line(results.back()) << '\n' << std::flush;
  }
  return results;
}

std::string format_line(const CriterionResult& r) {
  return "criterion " + std::to_string(r.id) + " (" + r.name + "): " + (r.pass ? "PASS" : "FAIL") + "  " +
         r.detail;
}

CoefficientDictionary scaled_dictionary(const std::string& coefficient, double factor) {
  const std::size_t idx = CoefficientSet::index_of(coefficient);
  return [idx, factor](double g, double gd, double m) {
    auto c = linearizable_coefficients(g, gd, m);
    c[idx] *= factor;
    return c;
  };
}

int verify_command(const Options& options, const RunOptions& run, std::ostream& out) {
  namespace fs = std::filesystem;
  const fs::path dir = run.out_dir ? fs::path(*run.out_dir) : fs::path("results");
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = dir / ".verify_probe";
  {
    std::ofstream f(probe);
    if (ec || !f) {
      out << "error: output directory " << dir.string() << " is not writable\n";
      return kExitConfig;
    }
  }
  fs::remove(probe, ec);

  const auto start = std::chrono::steady_clock::now();
  const auto results = run_all(options, out);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report = {{"criteria", json::array()}, {"wall_clock_seconds", seconds}};
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    report["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  report["pass"] = all;
  write_atomic(dir / "verify_report.json", report.dump(2) + "\n");
  const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.pass; });
  out << (all ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return all ? kExitPass : kExitFail;
}

}  // namespace nlqm::acceptance
