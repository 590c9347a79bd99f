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

#include "doctest.h"

#include <cmath>
#include <random>

#include "nlqm/errors.hpp"
#include "nlqm/gauge.hpp"
#include "support.hpp"

using namespace nlqm;
using namespace nlqm::testing;

TEST_CASE("gauge schedules") {
  const auto c = GaugeSchedule::constant(0.4);
  CHECK(c.gamma(3.0) == 0.4);
  CHECK(c.gamma_dot(3.0) == 0.0);
  const auto p = GaugeSchedule::piecewise_linear({{0.0, 0.2}, {0.25, 0.7}, {0.5, 0.4}});
  CHECK(p.gamma(0.125) == doctest::Approx(0.45));
  CHECK(p.gamma_dot(0.1) == doctest::Approx(2.0));
  CHECK(p.gamma_dot(0.3) == doctest::Approx(-1.2));
  CHECK(p.gamma(1.0) == doctest::Approx(0.4));
  CHECK_THROWS_AS(GaugeSchedule::piecewise_linear({{0.5, 0.0}, {0.1, 1.0}}), ConfigurationError);
}

TEST_CASE("apply_gauge basics") {
  const Grid g = Grid::line(128, 16.0);
  const auto psi = normalized(gaussian(g, 0.0, 1.0, 0.5));
  CHECK(l2_distance(apply_gauge(psi, 0.0, {}), psi) == 0.0);
  const auto unimodular = plane_wave(g, 2);
  CHECK(l2_distance(apply_gauge(unimodular, 1.7, {}), unimodular) < 1e-14);
  const auto mapped = apply_gauge(psi, 0.9, {});
  CHECK(max_abs(density(mapped).values, density(psi).values) < 1e-12);
  // Phase shift is gamma ln|psi| at a cell well inside the packet.
  const std::size_t mid = g.size() / 2 + 3;
  const double expected = 0.9 * std::log(std::abs(psi.values[mid]));
  CHECK(std::arg(mapped.values[mid] / psi.values[mid]) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(apply_gauge(Wavefunction(g), 1.0, {}), DegenerateStateError);
}

TEST_CASE("gauge round trip and projectivity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Grid g = Grid::line(256, 20.0);
  const auto gauss = normalized(gaussian(g, 0.0, 1.0, 0.0));
  CHECK(l2_distance(invert_gauge(apply_gauge(gauss, 0.7, {}), 0.7, {}), gauss) < 1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto psi = random_smooth(g, rng);
    const double g1 = u(rng), g2 = u(rng);
    const auto a = apply_gauge(apply_gauge(psi, g1, {}), g2, {});
    CHECK(l2_distance(a, apply_gauge(psi, g1 + g2, {})) < 1e-12);
    const auto r = Region::interval(u(rng), u(rng) + 3.0);
    CHECK(std::abs(born_probability(apply_gauge(psi, g1, {}), r) - born_probability(psi, r)) < 1e-12);
  }
}

TEST_CASE("phase gauge of the second kind") {
  const Grid g = Grid::line(64, 8.0);
  const auto psi = gaussian(g, 0.0, 1.0, 0.0);
  RealField theta(g);
  for (std::size_t i = 0; i < g.size(); ++i) theta.values[i] = 0.3 * g.coordinate(0, i);
  const auto m = apply_phase_gauge(psi, theta);
  CHECK(max_abs(density(m).values, density(psi).values) < 1e-15);
}

TEST_CASE("generalized projections") {
  const Grid g = Grid::line(256, 20.0);
  const auto psi = normalized(gaussian(g, 0.0, 1.2, 0.6));
  const auto e = ProjectionSpec::position(Region::interval(-1.0, 2.0));
  SUBCASE("gamma zero is the ordinary projection") {
    CHECK(l2_distance(generalized_projection(psi, e, 0.0, {}), apply_projection(psi, e)) == 0.0);
  }
  SUBCASE("identity") {
    CHECK(l2_distance(generalized_projection(psi, ProjectionSpec::identity(), 0.8, {}), psi) < 1e-14);
  }
  SUBCASE("idempotent") {
    for (const auto& p : {e, ProjectionSpec::momentum_band(Region::interval(-1.0, 1.5, Space::momentum))}) {
      const auto once = generalized_projection(psi, p, 0.5, {});
      const auto twice = generalized_projection(once, p, 0.5, {});
      CHECK(l2_distance(once, twice) < 1e-10);
    }
  }
  SUBCASE("non-idempotent multiplier is rejected") {
    std::vector<double> m(g.size(), 1.0);
    m[3] = 0.5;
    CHECK_THROWS_AS(apply_projection(psi, ProjectionSpec::diagonal(Space::position, m)), InvalidProjectionError);
  }
}

TEST_CASE("topological equivalence checks") {
  const Grid g = Grid::line(256, 30.0);
  const double k0 = 2.0 * kPi * 2 / 30.0;
  const std::vector<Wavefunction> states = {normalized(gaussian(g, 0.0, 0.8, k0)),
                                            normalized(gaussian(g, 1.0, 1.0, -k0))};
  const std::vector<Region> regions = {Region::interval(-2.0, 0.0), Region::interval(0.5, 3.0)};
  const std::vector<double> times = {0.1, 0.3};
  QuantumSystem linear{"linear", {}};
  linear.evolution.dt = 1e-3;
  linear.evolution.node_floor = NodeFloorPolicy{1e-14};

  SUBCASE("identity map on one system") {
    const auto r = check_topological_equivalence(linear, linear, IdentityMap{}, states, regions, times);
    CHECK(r.pass);
    CHECK(r.max_position_residual == 0.0);
    CHECK(r.max_evolution_residual == 0.0);
  }
  QuantumSystem gauged{"gauged", linear.evolution};
  gauged.evolution.gauge_schedule = GaugeSchedule::constant(0.4);
  // T = N_g o T_lin o N_g^-1, so the map into the linear system is N_{-g}.
  const GaugeMap map = NonlinearGaugeMap{GaugeSchedule::constant(-0.4), linear.evolution.node_floor};
  SUBCASE("gauge-transformed system") {
    const auto r = check_topological_equivalence(gauged, linear, map, states, regions, times);
    CHECK(r.pass);
    CHECK(r.max_position_residual < 1e-12);
    CHECK(r.max_evolution_residual < 1e-4);
  }
  SUBCASE("perturbed coefficient fails") {
    gauged.evolution.dictionary = [](double gm, double gd, double m) {
      auto c = linearizable_coefficients(gm, gd, m);
      c.mu2 *= 1.1;
      return c;
    };
    const auto r = check_topological_equivalence(gauged, linear, map, states, regions, times);
    CHECK_FALSE(r.pass);
    CHECK(r.max_evolution_residual > 1e-4);
  }
  SUBCASE("empty samples") {
    CHECK_THROWS(check_topological_equivalence(linear, linear, IdentityMap{}, {}, regions, times));
  }
}
