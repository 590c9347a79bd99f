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
#include "nlqm/functionals.hpp"
#include "support.hpp"

using namespace nlqm;
using namespace nlqm::testing;

namespace {

// Closed forms for exp(-(x-c)^2/2w^2 + i k x): rho = exp(-u^2/w^2), u = x - c.
struct GaussianForms {
  double w, k, c;
  double r1(double x) const { return k * (-2.0 * (x - c) / (w * w)); }
  double r2(double x) const { const double u = x - c; return 4.0 * u * u / std::pow(w, 4) - 2.0 / (w * w); }
  double r3(double) const { return k * k; }
  double r4(double x) const { return r1(x); }
  double r5(double x) const { const double u = x - c; return 4.0 * u * u / std::pow(w, 4); }
  double log(double x) const { const double u = x - c; return -u * u / (w * w); }
};


template <class F>
double interior_error(const Grid& g, const std::vector<double>& got, F expected, double half_width) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    if (std::abs(x) <= half_width) m = std::max(m, std::abs(got[i] - expected(x)));
  }
  return m;
}

}  // namespace

TEST_CASE("effective density floor") {
  const std::vector<double> rho = {0.0, 1e-20, 0.5, 2.0};
  const auto e = effective_density(rho, NodeFloorPolicy{1e-12});
  CHECK(e[0] == 2e-12);
  CHECK(e[1] == 2e-12);
  CHECK(e[2] == 0.5);
  CHECK(e[3] == 2.0);
  CHECK_THROWS_AS(NodeFloorPolicy{0.0}.validate(), ConfigurationError);
  CHECK_THROWS_AS(NodeFloorPolicy{1e-3}.validate(), ConfigurationError);
}

TEST_CASE("functionals of a real state ignore the current") {
  const Grid g = Grid::line(256, 20.0);
  Wavefunction psi = gaussian(g, 0.5, 1.5, 0.0);
  for (auto& v : psi.values) v = v.real();
  const auto f = evaluate_all(psi, {});
  for (std::size_t i = 0; i < g.size(); ++i) {
    // div J and J vanish to round-off; the functionals divide that by rho.
    const double rho = std::norm(psi.values[i]);
    if (rho < 1e-6) continue;
    CHECK(std::abs(f.r1[i]) * rho < 1e-13);
    CHECK(std::abs(f.r3[i]) * rho * rho < 1e-13);
    CHECK(std::abs(f.r4[i]) * rho * rho < 1e-13);
  }
}

TEST_CASE("functionals match symbolic derivatives of a gaussian") {
  const Grid g = Grid::line(512, 40.0);
  SUBCASE("rho = exp(-x^2)") {
    const auto psi = gaussian(g, 0.0, 1.0, 0.0);
    const auto f = evaluate_all(psi, {});
    // Away from the edges and where rho is well above round-off.
    CHECK(interior_error(g, f.r2, [](double x) { return 4 * x * x - 2; }, 3.0) < 1e-8);
    CHECK(interior_error(g, f.r5, [](double x) { return 4 * x * x; }, 3.0) < 1e-8);
  }
  SUBCASE("with carrier") {
    const GaussianForms c{4.0, 2.0 * kPi * 4 / 40.0, 0.0};
    const auto psi = gaussian(g, c.c, c.w, c.k);
    const auto f = evaluate_all(psi, {});
    CHECK(interior_error(g, f.r1, [&](double x) { return c.r1(x); }, 10.0) < 1e-8);
    CHECK(interior_error(g, f.r2, [&](double x) { return c.r2(x); }, 10.0) < 1e-8);
    CHECK(interior_error(g, f.r3, [&](double x) { return c.r3(x); }, 10.0) < 1e-8);
    CHECK(interior_error(g, f.r4, [&](double x) { return c.r4(x); }, 10.0) < 1e-8);
    CHECK(interior_error(g, f.r5, [&](double x) { return c.r5(x); }, 10.0) < 1e-8);
    CHECK(interior_error(g, f.log, [&](double x) { return c.log(x); }, 10.0) < 1e-8);
    CHECK(max_abs(evaluate(FunctionalId::R2, psi, {}).values, f.r2) == 0.0);
    CHECK(max_abs(evaluate(FunctionalId::LOG, psi, {}).values, f.log) == 0.0);
  }
}

TEST_CASE("functionals of a plane wave") {
  const Grid g = Grid::line(128, 10.0);
  const double k = 2.0 * kPi * 3 / 10.0;
  const auto f = evaluate_all(plane_wave(g, 3), {});
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(f.r3[i] - k * k) < 1e-10);
    CHECK(std::abs(f.r2[i]) < 1e-10);
    CHECK(std::abs(f.r5[i]) < 1e-10);
    CHECK(std::abs(f.log[i]) < 1e-14);
  }
  CHECK_THROWS_AS(evaluate_all(Wavefunction(g), {}), DegenerateStateError);
}

TEST_CASE("functionals are scale invariant up to the logarithm") {
  std::mt19937_64 rng(11);
  const Grid g = Grid::line(256, 16.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = random_smooth(g, rng);
    Wavefunction scaled = psi;
    const Complex c{0.3 + trial, -1.2};
    for (auto& v : scaled.values) v *= c;
    const auto a = evaluate_all(psi, {});
    const auto b = evaluate_all(scaled, {});
    // Compare where round-off divided by rho stays small.
    double worst = 0.0, log_shift = 0.0;
    const double shift = std::log(std::norm(c));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::norm(psi.values[i]) < 1e-4) continue;
      for (auto p : {&FunctionalFields::r1, &FunctionalFields::r2, &FunctionalFields::r3,
                     &FunctionalFields::r4, &FunctionalFields::r5}) {
        worst = std::max(worst, std::abs((a.*p)[i] - (b.*p)[i]));
      }
      log_shift = std::max(log_shift, std::abs(b.log[i] - a.log[i] - shift));
    }
    CHECK(worst < 1e-10);
    CHECK(log_shift < 1e-12);
  }
}

TEST_CASE("halving the floor only changes floored cells") {
  const Grid g = Grid::line(256, 40.0);
  const auto psi = gaussian(g, 0.0, 1.0, 0.5);
  const NodeFloorPolicy p1{1e-8};
  const NodeFloorPolicy p2{5e-9};
  const auto a = evaluate_all(psi, p1);
  const auto b = evaluate_all(psi, p2);
  double mx = 0.0;
  for (const auto& v : psi.values) mx = std::max(mx, std::norm(v));
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::norm(psi.values[i]) >= 2.0 * p1.epsilon_rel * mx) {
      CHECK(a.r2[i] == b.r2[i]);
      CHECK(a.log[i] == b.log[i]);
    }
  }
}

TEST_CASE("functionals converge spectrally with resolution") {
  auto err = [](std::size_t n) {
    const Grid g = Grid::line(n, 24.0);
    const GaussianForms c{2.0, 2.0 * kPi * 2 / 24.0, 0.0};
    const auto f = evaluate_all(gaussian(g, 0.0, c.w, c.k), {});
    return interior_error(g, f.r2, [&](double x) { return c.r2(x); }, 5.0);
  };
  const double e32 = err(32);
  const double e64 = err(64);
  // Far faster than any fixed low order: 2^8 = 256.
  CHECK(e32 / e64 > 256.0);
}

TEST_CASE("nonlinear right-hand side") {
  const Grid g = Grid::line(128, 20.0);
  const auto psi = gaussian(g, 0.0, 1.3, 0.7);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = 0.1 * g.coordinate(0, i);

  SUBCASE("zero coefficients") {
    const auto r = nonlinear_rhs(psi, CoefficientSet::zero(), {}, {});
    for (const auto& z : r) CHECK(z == Complex{0.0, 0.0});
  }
  SUBCASE("potential only") {
    const auto r = nonlinear_rhs(psi, CoefficientSet::linear(), v, {});
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(r[i] - v[i] * psi.values[i]) < 1e-15);
  }
  SUBCASE("term-by-term evaluation") {
    CoefficientSet c;
    c.nu1 = 0.1; c.nu2 = 0.2; c.mu0 = 1.0; c.mu1 = 0.3; c.mu2 = -0.4;
    c.mu3 = 0.05; c.mu4 = -0.3; c.mu5 = 0.25; c.alpha1 = 0.15;
    const auto r = nonlinear_rhs(psi, c, v, {});
    const auto f = evaluate_all(psi, {});
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Complex expected =
          (Complex{0.0, c.nu1 * f.r1[i] + c.nu2 * f.r2[i]} + c.mu0 * v[i] + c.mu1 * f.r1[i] + c.mu2 * f.r2[i] +
           c.mu3 * f.r3[i] + c.mu4 * f.r4[i] + c.mu5 * f.r5[i] + c.alpha1 * f.log[i]) *
          psi.values[i];
      CHECK(std::abs(r[i] - expected) < 1e-12 * (1.0 + std::abs(expected)));
    }
  }
  SUBCASE("grid mismatch") {
    CHECK_THROWS_AS(nonlinear_rhs(psi, CoefficientSet::linear(), std::vector<double>(7), {}), ShapeError);
  }
}
