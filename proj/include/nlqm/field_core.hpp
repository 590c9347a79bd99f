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

#ifndef NLQM_FIELD_CORE_HPP
#define NLQM_FIELD_CORE_HPP

#include <vector>

#include "nlqm/field.hpp"

namespace nlqm {

// Throws InvalidStateError if any value is NaN or infinite.
void require_finite(const Wavefunction& psi);
// Throws ShapeError unless both live on the same grid.
void require_same_grid(const Grid& a, const Grid& b);

/// rho = |psi|^2 pointwise (unnormalized Born numerator).
DensityField density(const Wavefunction& psi);

/// Probability current J = Im(conj(psi) grad psi) with a spectral gradient
/// (hbar = m = 1; mass factors are applied by the callers that need them).
CurrentField current(const Wavefunction& psi);

/// p_B[psi] = ||E(B) psi||^2 / ||psi||^2 for a position-space region.
double born_probability(const Wavefunction& psi, const Region& region);

Complex inner(const Wavefunction& phi, const Wavefunction& psi);
double norm(const Wavefunction& psi);
Wavefunction normalized(const Wavefunction& psi);

/// Continuum-normalized Fourier transform,
///   phi(k) = (2 pi)^{-d/2} sum_x psi(x) exp(-i k x) dV,
/// so that Parseval holds with the momentum cell volume.
MomentumWavefunction fourier(const Wavefunction& psi);
Wavefunction inverse_fourier(const MomentumWavefunction& phi, double time = 0.0);
double norm(const MomentumWavefunction& phi);

/// Spectral partial derivative d/dx_a (Nyquist mode dropped).
std::vector<Complex> spectral_derivative(const Wavefunction& psi, std::size_t axis);
/// Spectral Laplacian.
std::vector<Complex> spectral_laplacian(const Wavefunction& psi);
/// Spectral gradient of a real field, one component per axis.
std::vector<std::vector<double>> spectral_gradient(const RealField& f);

/// psi(x1, x2) = phi1(x1) phi2(x2) on the plane grid built from both lines.
Wavefunction tensor_product(const Wavefunction& first, const Wavefunction& second);
/// Marginal density of a two-axis state on axis `keep`: sum of |psi|^2 dx
/// over the other axis.
DensityField marginal_density(const Wavefunction& psi, std::size_t keep);
/// Line grid of one axis of a plane grid.
Grid axis_grid(const Grid& plane, std::size_t a);

}  // namespace nlqm

#endif  // NLQM_FIELD_CORE_HPP
