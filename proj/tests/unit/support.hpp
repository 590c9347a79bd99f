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

#ifndef NLQM_TESTS_SUPPORT_HPP
#define NLQM_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "nlqm/field.hpp"
#include "nlqm/field_core.hpp"

namespace nlqm::testing {

inline constexpr double kPi = std::numbers::pi;

// exp(-(x-c)^2 / 2w^2 + i k x) summed over periodic images, not normalized.
inline Wavefunction gaussian(const Grid& grid, double center, double width, double k) {
  Wavefunction psi(grid);
  const double length = grid.axis(0).length;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coordinate(0, i);
    Complex s = 0.0;
    for (int n = -3; n <= 3; ++n) {
      const double u = x - center + n * length;
      s += std::exp(Complex{-u * u / (2.0 * width * width), k * (x + n * length)});
    }
    psi.values[i] = s;
  }
  return psi;
}

inline Wavefunction plane_wave(const Grid& grid, int mode, double amplitude = 1.0) {
  Wavefunction psi(grid);
  const double k = 2.0 * kPi * mode / grid.axis(0).length;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    psi.values[i] = amplitude * std::exp(Complex{0.0, k * grid.coordinate(0, i)});
  }
  return psi;
}

// Smooth random state built from low Fourier modes over a Gaussian envelope.
inline Wavefunction random_smooth(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Wavefunction psi(grid);
  std::vector<Complex> c(5);
  for (auto& v : c) v = {n(rng), n(rng)};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unravel(i);
    Complex f = 0.5;
    double r2 = 0.0;
    for (std::size_t a = 0; a < grid.dim(); ++a) {
      const double x = grid.coordinate(a, idx[a]);
      const double length = grid.axis(a).length;
      r2 += x * x / (length * length);
      for (std::size_t m = 0; m < c.size(); ++m) {
        f += 0.3 * c[m] * std::exp(Complex{0.0, 2.0 * kPi * static_cast<double>(m + 1) * x / length});
      }
    }
    psi.values[i] = f * std::exp(-30.0 * r2);
  }
  return normalized(psi);
}

inline double l2_distance(const Wavefunction& a, const Wavefunction& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.grid.cell_volume());
}

inline double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace nlqm::testing

#endif  // NLQM_TESTS_SUPPORT_HPP
