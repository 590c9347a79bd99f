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

#include "nlqm/field_core.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlqm/errors.hpp"
#include "nlqm/spectral.hpp"

namespace nlqm {

void require_finite(const Wavefunction& psi) {
  for (const auto& v : psi.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InvalidStateError("wavefunction contains non-finite values");
    }
  }
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw ShapeError("operands live on different grids");
}

DensityField density(const Wavefunction& psi) {
  require_finite(psi);
  DensityField rho(psi.grid);
  for (std::size_t i = 0; i < psi.values.size(); ++i) rho.values[i] = std::norm(psi.values[i]);
  return rho;
}

std::vector<Complex> spectral_derivative(const Wavefunction& psi, std::size_t axis) {
  const auto spec = Spectral::for_grid(psi.grid);
  std::vector<Complex> f(psi.values.size());
  spec->forward(psi.values, f);
  const auto& k = spec->k_derivative(axis);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= Complex{0.0, k[i]};
  spec->backward(f, f);
  return f;
}

std::vector<Complex> spectral_laplacian(const Wavefunction& psi) {
  const auto spec = Spectral::for_grid(psi.grid);
  std::vector<Complex> f(psi.values.size());
  spec->forward(psi.values, f);
  const auto& k2 = spec->k_squared();
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= -k2[i];
  spec->backward(f, f);
  return f;
}

std::vector<std::vector<double>> spectral_gradient(const RealField& field) {
  Wavefunction w(field.grid);
  for (std::size_t i = 0; i < field.values.size(); ++i) w.values[i] = field.values[i];
  std::vector<std::vector<double>> grad(field.grid.dim());
  for (std::size_t a = 0; a < field.grid.dim(); ++a) {
    const auto d = spectral_derivative(w, a);
    grad[a].resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) grad[a][i] = d[i].real();
  }
  return grad;
}

CurrentField current(const Wavefunction& psi) {
  require_finite(psi);
  CurrentField j{psi.grid, {}};
  for (std::size_t a = 0; a < psi.grid.dim(); ++a) {
    const auto d = spectral_derivative(psi, a);
    std::vector<double> comp(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) comp[i] = (std::conj(psi.values[i]) * d[i]).imag();
    j.components.push_back(std::move(comp));
  }
  return j;
}

double born_probability(const Wavefunction& psi, const Region& region) {
  if (region.space() != Space::position) {
    throw DomainError("born_probability expects a position-space region");
  }
  require_finite(psi);
  const auto w = region.weights(psi.grid);
  double inside = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < psi.values.size(); ++i) {
    const double r = std::norm(psi.values[i]);
    total += r;
    inside += w[i] * r;
  }
  if (!(total > 0.0)) throw DegenerateStateError("born_probability of a zero-norm state");
  return inside / total;
}

Complex inner(const Wavefunction& phi, const Wavefunction& psi) {
  require_same_grid(phi.grid, psi.grid);
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < psi.values.size(); ++i) s += std::conj(phi.values[i]) * psi.values[i];
  return s * psi.grid.cell_volume();
}

double norm(const Wavefunction& psi) {
  double s = 0.0;
  for (const auto& v : psi.values) s += std::norm(v);
  return std::sqrt(s * psi.grid.cell_volume());
}

Wavefunction normalized(const Wavefunction& psi) {
  const double n = norm(psi);
  if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateStateError("cannot normalize state");
  Wavefunction out = psi;
  for (auto& v : out.values) v /= n;
  return out;
}

namespace {

// exp(-i k . x0) phase that moves the FFT origin to the box corner -L/2, and
// the (2 pi)^{-d/2} dV prefactor of the continuum transform.
std::vector<Complex> fourier_weights(const Grid& grid) {
  const auto spec = Spectral::for_grid(grid);
  double pref = grid.cell_volume();
  for (std::size_t a = 0; a < grid.dim(); ++a) pref /= std::sqrt(2.0 * std::numbers::pi);
  std::vector<Complex> w(grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    double phase = 0.0;
    for (std::size_t a = 0; a < grid.dim(); ++a) {
      phase -= spec->k(a)[i] * (-0.5 * grid.axis(a).length);
    }
    w[i] = pref * Complex{std::cos(phase), std::sin(phase)};
  }
  return w;
}

}  // namespace

MomentumWavefunction fourier(const Wavefunction& psi) {
  require_finite(psi);
  const auto spec = Spectral::for_grid(psi.grid);
  MomentumWavefunction phi{psi.grid, std::vector<Complex>(psi.values.size())};
  spec->forward(psi.values, phi.values);
  const auto w = fourier_weights(psi.grid);
  for (std::size_t i = 0; i < w.size(); ++i) phi.values[i] *= w[i];
  return phi;
}

Wavefunction inverse_fourier(const MomentumWavefunction& phi, double time) {
  const auto spec = Spectral::for_grid(phi.grid);
  const auto w = fourier_weights(phi.grid);
  Wavefunction psi(phi.grid, time);
  for (std::size_t i = 0; i < w.size(); ++i) psi.values[i] = phi.values[i] / w[i];
  spec->backward(psi.values, psi.values);
  return psi;
}

double norm(const MomentumWavefunction& phi) {
  double s = 0.0;
  for (const auto& v : phi.values) s += std::norm(v);
  return std::sqrt(s * phi.grid.momentum_cell_volume());
}

Grid axis_grid(const Grid& plane, std::size_t a) {
  if (plane.dim() != 2) throw ShapeError("axis_grid expects a plane grid");
  return Grid({plane.axis(a)});
}

Wavefunction tensor_product(const Wavefunction& first, const Wavefunction& second) {
  if (first.grid.dim() != 1 || second.grid.dim() != 1) {
    throw ShapeError("tensor_product expects two line states");
  }
  const Grid g = Grid::plane(first.grid.axis(0), second.grid.axis(0));
  Wavefunction out(g, first.time);
  const std::size_t n1 = second.values.size();
  for (std::size_t i = 0; i < first.values.size(); ++i) {
    for (std::size_t j = 0; j < n1; ++j) out.values[i * n1 + j] = first.values[i] * second.values[j];
  }
  return out;
}

DensityField marginal_density(const Wavefunction& psi, std::size_t keep) {
  if (psi.grid.dim() != 2 || keep > 1) throw ShapeError("marginal_density expects a plane state");
  const Grid line = axis_grid(psi.grid, keep);
  const double other_dx = psi.grid.axis(1 - keep).spacing();
  DensityField m(line);
  for (std::size_t flat = 0; flat < psi.values.size(); ++flat) {
    const auto idx = psi.grid.unravel(flat);
    m.values[idx[keep]] += std::norm(psi.values[flat]) * other_dx;
  }
  return m;
}

}  // namespace nlqm
