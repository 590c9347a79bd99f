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

#include "nlqm/dynamics.hpp"
#include "nlqm/errors.hpp"
#include "nlqm/gauge.hpp"
#include "support.hpp"

using namespace nlqm;
using namespace nlqm::testing;

namespace {

double width_of(const Wavefunction& psi) {
  double m0 = 0, m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const double x = psi.grid.coordinate(0, i);
    const double r = std::norm(psi.values[i]);
    m0 += r; m1 += r * x; m2 += r * x * x;
  }
  const double mean = m1 / m0;
  return std::sqrt(2.0 * (m2 / m0 - mean * mean));
}

double centroid(const Wavefunction& psi) {
  double m0 = 0, m1 = 0;
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const double r = std::norm(psi.values[i]);
    m0 += r; m1 += r * psi.grid.coordinate(0, i);
  }
  return m1 / m0;
}

}  // namespace

TEST_CASE("coefficient dictionary") {
  const auto lin = linearizable_coefficients(0.0, 0.0, 1.0);
  CHECK(lin.is_linear());
  const auto c = linearizable_coefficients(1.0, 0.0, 1.0);
  CHECK(c.nu1 == 0.0);
  CHECK(c.mu3 == 0.0);
  CHECK(c.alpha1 == 0.0);
  CHECK(c.mu0 == 1.0);
  CHECK(std::abs(c.nu2) == doctest::Approx(0.25));
  CHECK(std::abs(c.mu2) == doctest::Approx(0.25));
  const auto d = linearizable_coefficients(0.0, 2.0, 1.0);
  CHECK(d.alpha1 == -1.0);
  CHECK(d.nu2 == 0.0);
  CHECK(d.mu2 == 0.0);
  CHECK_THROWS_AS(linearizable_coefficients(0.1, 0.0, 0.0), DomainError);
}

TEST_CASE("free gaussian follows the dispersion law") {
  const Grid g = Grid::line(1024, 80.0);
  const auto psi = normalized(gaussian(g, 0.0, 1.0, 0.0));
  EvolutionSpec spec;
  spec.mass = 1.0;
  const auto out = propagate_linear(psi, spec, 1.0);
  CHECK(std::abs(width_of(out) - std::sqrt(2.0)) / std::sqrt(2.0) < 1e-6);
  CHECK(std::abs(norm(out) - 1.0) < 1e-12);
  CHECK(out.time == doctest::Approx(1.0));
}

TEST_CASE("plane wave rotates its phase") {
  const Grid g = Grid::line(64, 10.0);
  const auto psi = plane_wave(g, 3);
  const double k = 2.0 * kPi * 3 / 10.0;
  EvolutionSpec spec;
  spec.mass = 2.0;
  const auto out = propagate_linear(psi, spec, 0.7);
  const Complex phase = std::exp(Complex{0.0, -k * k * 0.7 / 4.0});
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(out.values[i] - phase * psi.values[i]) < 1e-12);
}

TEST_CASE("harmonic coherent state follows the classical trajectory") {
  // Ehrenfest oracle: x(t) = x0 cos(w t) for a displaced ground state.
  const double omega = 1.0, x0 = 2.0;
  const Grid g = Grid::line(512, 32.0);
  const auto psi = normalized(gaussian(g, x0, 1.0, 0.0));
  EvolutionSpec spec;
  spec.potential.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) spec.potential[i] = 0.5 * omega * omega * std::pow(g.coordinate(0, i), 2);
  spec.dt = 1e-3;
  for (double t : {0.5, 1.0, 2.0}) {
    const auto out = propagate_linear(psi, spec, t);
    CHECK(std::abs(centroid(out) - x0 * std::cos(omega * t)) < 1e-5);
  }
}

TEST_CASE("dt must resolve the kinetic phase") {
  const Grid g = Grid::line(1024, 10.0);
  EvolutionSpec spec;
  spec.dt = 0.1;
  CHECK_THROWS_AS(spec.validate(g), ConfigurationError);
  CHECK_THROWS_AS(propagate(normalized(gaussian(g, 0, 1, 0)), spec, 1.0), ConfigurationError);
}

TEST_CASE("nonlinear integrator") {
  const Grid g = Grid::line(256, 30.0);
  const double k0 = 2.0 * kPi * 2 / 30.0;
  const auto psi = normalized(gaussian(g, 0.0, 1.0, k0));
  EvolutionSpec spec;
  spec.node_floor = NodeFloorPolicy{1e-14};

  SUBCASE("zero nonlinear coefficients reduce to the linear flow") {
    EvolutionSpec nl = spec;
    nl.scheme = Scheme::rk4_full;
    spec.dt = 1e-3;
    nl.dt = 2.5e-4;
    const auto a = propagate_nonlinear(psi, nl, 0.5);
    REQUIRE(a.ok());
    CHECK(l2_distance(a.state(), propagate_linear(psi, spec, 0.5)) < 1e-8);
    const auto b = propagate_nonlinear(psi, spec, 0.5);
    CHECK(l2_distance(b.state(), propagate_linear(psi, spec, 0.5)) < 1e-12);
  }
  SUBCASE("gauge-equivalence identity and norm conservation") {
    for (double gamma : {0.3, -0.5}) {
      EvolutionSpec nl = spec;
      nl.coefficients = linearizable_coefficients(gamma, 0.0, nl.mass);
      const auto a = propagate_nonlinear(psi, nl, 0.5);
      REQUIRE(a.ok());
      const auto b = apply_gauge(propagate_linear(invert_gauge(psi, gamma, spec.node_floor), spec, 0.5), gamma,
                                 spec.node_floor);
      CHECK(l2_distance(a.state(), b) < 1e-4);
      CHECK(std::abs(norm(a.state()) - 1.0) < 1e-6);
    }
  }
  SUBCASE("second-order self-convergence") {
    EvolutionSpec nl = spec;
    nl.coefficients.mu2 = 0.1;
    nl.coefficients.mu3 = 0.2;
    auto run = [&](double dt) {
      nl.dt = dt;
      return propagate_nonlinear(psi, nl, 0.3).value();
    };
    const auto a = run(2e-3), b = run(1e-3), c = run(5e-4);
    const double ratio = l2_distance(a, b) / l2_distance(b, c);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
  }
  SUBCASE("log-only model keeps the gaussian shape") {
    // For psi = exp(c - a x^2/2): da/dt = -i (a^2/m + 2 alpha1 Re a), width = 1/sqrt(Re a).
    const double alpha1 = 0.5, m = 1.0;
    EvolutionSpec nl = spec;
    nl.coefficients.alpha1 = alpha1;
    nl.dt = 1e-3;
    const auto real_psi = normalized(gaussian(g, 0.0, 1.0, 0.0));
    const auto out = propagate_nonlinear(real_psi, nl, 1.0).value();
    Complex a = 1.0;
    const double h = 1e-4;
    auto f = [&](Complex v) { return Complex{0.0, -1.0} * (v * v / m + 2.0 * alpha1 * v.real()); };
    for (int s = 0; s < 10000; ++s) {
      const Complex k1 = f(a), k2 = f(a + 0.5 * h * k1), k3 = f(a + 0.5 * h * k2), k4 = f(a + h * k3);
      a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    CHECK(std::abs(width_of(out) - 1.0 / std::sqrt(a.real())) < 1e-3);
  }
  SUBCASE("blow-up is returned, not thrown") {
    EvolutionSpec nl = spec;
    nl.coefficients.nu2 = -2.0;  // anti-diffusive imaginary term
    nl.dt = 1e-3;
    const auto r = propagate_nonlinear(psi, nl, 5.0);
    REQUIRE_FALSE(r.ok());
    CHECK(r.blowup().time_of_detection > 0.0);
    CHECK_THROWS_AS(r.value(), BlowupError);
  }
  SUBCASE("reference norm carries across segments") {
    Wavefunction tiny = psi;
    for (auto& v : tiny.values) v *= 0.01;
    EvolutionSpec nl = spec;
    nl.coefficients.mu2 = 0.1;
    CHECK_FALSE(propagate_nonlinear(psi, nl, 0.01, norm(tiny)).ok());
    CHECK(propagate_nonlinear(psi, nl, 0.01).ok());
  }
  SUBCASE("deterministic") {
    EvolutionSpec nl = spec;
    nl.coefficients.mu2 = 0.2;
    const auto a = propagate_nonlinear(psi, nl, 0.1).value();
    const auto b = propagate_nonlinear(psi, nl, 0.1).value();
    CHECK(a.values == b.values);
  }
}

TEST_CASE("free propagation") {
  const Grid g = Grid::line(256, 40.0);
  const auto psi = normalized(gaussian(g, 0.0, 1.0, 0.5));
  CHECK(l2_distance(free_propagate(psi, 1.0, 0.0), psi) == 0.0);
  CHECK(l2_distance(free_propagate(free_propagate(psi, 1.0, 0.3), 1.0, 0.4), free_propagate(psi, 1.0, 0.7)) < 1e-13);
  EvolutionSpec spec;
  CHECK(l2_distance(free_propagate(psi, 1.0, 1.0), propagate_linear(psi, spec, 1.0)) < 1e-8);
}
