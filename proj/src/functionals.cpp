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

#include "nlqm/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlqm/errors.hpp"
#include "nlqm/field_core.hpp"
#include "nlqm/spectral.hpp"

namespace nlqm {

double& CoefficientSet::operator[](std::size_t i) {
  switch (i) {
    case 0: return nu1;
    case 1: return nu2;
    case 2: return mu0;
    case 3: return mu1;
    case 4: return mu2;
    case 5: return mu3;
    case 6: return mu4;
    case 7: return mu5;
    case 8: return alpha1;
    default: throw DomainError("coefficient index out of range");
  }
}

double CoefficientSet::operator[](std::size_t i) const {
  return const_cast<CoefficientSet&>(*this)[i];
}

std::size_t CoefficientSet::index_of(std::string_view name) {
  for (std::size_t i = 0; i < count; ++i) {
    if (names[i] == name) return i;
  }
  throw ConfigurationError("unknown coefficient '" + std::string(name) + "'");
}

bool CoefficientSet::has_nonlinear_terms() const {
  return nu1 != 0.0 || nu2 != 0.0 || mu1 != 0.0 || mu2 != 0.0 || mu3 != 0.0 || mu4 != 0.0 ||
         mu5 != 0.0 || alpha1 != 0.0;
}

bool CoefficientSet::all_finite() const {
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite((*this)[i])) return false;
  }
  return true;
}

void NodeFloorPolicy::validate() const {
  if (!(epsilon_rel > 0.0 && epsilon_rel <= 1e-6)) {
    throw ConfigurationError("node floor epsilon_rel must lie in (0, 1e-6]");
  }
}

std::vector<double> effective_density(std::span<const double> rho, const NodeFloorPolicy& policy) {
  policy.validate();
  const double peak = rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end());
  const double floor = policy.epsilon_rel * peak;
  std::vector<double> out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = std::max(rho[i], floor);
  return out;
}

FunctionalFields evaluate_all(const Wavefunction& psi, const NodeFloorPolicy& policy) {
  require_finite(psi);
  const std::size_t n = psi.values.size();
  const std::size_t dim = psi.grid.dim();
  const auto spec = Spectral::for_grid(psi.grid);

  std::vector<Complex> hat(n);
  spec->forward(psi.values, hat);

  // Product-rule forms: grad rho = 2 Re(conj psi grad psi),
  // Lap rho = 2 Re(conj psi Lap psi) + 2 |grad psi|^2, div J = Im(conj psi Lap psi).
  std::vector<double> rho(n), lap_rho(n, 0.0), div_j(n), jj(n, 0.0), jg(n, 0.0), gg(n, 0.0);
  std::vector<Complex> work(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(psi.values[i]);
  for (std::size_t a = 0; a < dim; ++a) {
    const auto& k = spec->k_derivative(a);
    for (std::size_t i = 0; i < n; ++i) work[i] = hat[i] * Complex{0.0, k[i]};
    spec->backward(work, work);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex cg = std::conj(psi.values[i]) * work[i];
      const double grad_rho = 2.0 * cg.real();
      const double j = cg.imag();
      jj[i] += j * j;
      jg[i] += j * grad_rho;
      gg[i] += grad_rho * grad_rho;
      lap_rho[i] += 2.0 * std::norm(work[i]);
    }
  }
  const auto& k2 = spec->k_squared();
  for (std::size_t i = 0; i < n; ++i) work[i] = -k2[i] * hat[i];
  spec->backward(work, work);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex cl = std::conj(psi.values[i]) * work[i];
    lap_rho[i] += 2.0 * cl.real();
    div_j[i] = cl.imag();
  }

  const auto peak = *std::max_element(rho.begin(), rho.end());
  if (!(peak > 0.0)) throw DegenerateStateError("functionals of a zero-norm state");
  const auto rho_eff = effective_density(rho, policy);

  FunctionalFields f{psi.grid, {}, {}, {}, {}, {}, {}};
  f.r1.resize(n);
  f.r2.resize(n);
  f.r3.resize(n);
  f.r4.resize(n);
  f.r5.resize(n);
  f.log.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rho_eff[i];
    const double r2 = r * r;
    f.r1[i] = div_j[i] / r;
    f.r2[i] = lap_rho[i] / r;
    f.r3[i] = jj[i] / r2;
    f.r4[i] = jg[i] / r2;
    f.r5[i] = gg[i] / r2;
    f.log[i] = std::log(r);
  }
  return f;
}

RealField evaluate(FunctionalId id, const Wavefunction& psi, const NodeFloorPolicy& policy) {
  auto f = evaluate_all(psi, policy);
  switch (id) {
    case FunctionalId::R1: return RealField(psi.grid, std::move(f.r1));
    case FunctionalId::R2: return RealField(psi.grid, std::move(f.r2));
    case FunctionalId::R3: return RealField(psi.grid, std::move(f.r3));
    case FunctionalId::R4: return RealField(psi.grid, std::move(f.r4));
    case FunctionalId::R5: return RealField(psi.grid, std::move(f.r5));
    case FunctionalId::LOG: return RealField(psi.grid, std::move(f.log));
  }
  throw DomainError("unknown functional");
}

std::vector<Complex> nonlinear_rhs(const Wavefunction& psi, const CoefficientSet& c,
                                   std::span<const double> potential,
                                   const NodeFloorPolicy& policy) {
  const std::size_t n = psi.values.size();
  if (!potential.empty() && potential.size() != n) {
    throw ShapeError("potential does not match the wavefunction grid");
  }
  if (!c.all_finite()) throw ConfigurationError("coefficient set contains non-finite values");

  std::vector<Complex> out(n);
  if (!c.has_nonlinear_terms()) {
    require_finite(psi);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = potential.empty() ? 0.0 : potential[i];
      out[i] = c.mu0 * v * psi.values[i];
    }
    return out;
  }

  const auto f = evaluate_all(psi, policy);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = potential.empty() ? 0.0 : potential[i];
    const double re = c.mu0 * v + c.mu1 * f.r1[i] + c.mu2 * f.r2[i] + c.mu3 * f.r3[i] +
                      c.mu4 * f.r4[i] + c.mu5 * f.r5[i] + c.alpha1 * f.log[i];
    const double im = c.nu1 * f.r1[i] + c.nu2 * f.r2[i];
    out[i] = Complex{re, im} * psi.values[i];
  }
  return out;
}

}  // namespace nlqm
