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

#ifndef NLQM_SPECTRAL_HPP
#define NLQM_SPECTRAL_HPP

#include <memory>
#include <span>
#include <vector>

#include "nlqm/field.hpp"

namespace nlqm {

/// Shared FFT plans and wavenumber tables for one grid shape.
///
/// Instances are immutable after construction and safe to use from several
/// threads at once; obtain them through for_grid(), which caches per shape.
/// The forward transform is unnormalized, the backward one divides by N, so
/// backward(forward(f)) == f.
class Spectral {
 public:
  static std::shared_ptr<const Spectral> for_grid(const Grid& grid);

  explicit Spectral(const Grid& grid);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const Grid& grid() const { return grid_; }

  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  void backward(std::span<const Complex> in, std::span<Complex> out) const;

  /// k along axis `a` for every flat index.
  const std::vector<double>& k(std::size_t a) const { return k_.at(a); }
  /// |k|^2 for every flat index.
  const std::vector<double>& k_squared() const { return k2_; }
  /// k along axis `a` with the Nyquist mode zeroed; used for first
  /// derivatives so real fields keep real gradients.
  const std::vector<double>& k_derivative(std::size_t a) const { return kd_.at(a); }

 private:
  Grid grid_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
  std::vector<std::vector<double>> k_;
  std::vector<std::vector<double>> kd_;
  std::vector<double> k2_;
};

}  // namespace nlqm

#endif  // NLQM_SPECTRAL_HPP
