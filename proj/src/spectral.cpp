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

#include "nlqm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "nlqm/errors.hpp"

namespace nlqm {

namespace {

// FFTW planning is not thread-safe; execution with fftw_execute_dft is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

using ShapeKey = std::vector<std::tuple<std::size_t, double>>;

ShapeKey key_of(const Grid& grid) {
  ShapeKey key;
  for (const auto& ax : grid.axes()) key.emplace_back(ax.points, ax.length);
  return key;
}

fftw_plan as_plan(void* p) { return static_cast<fftw_plan>(p); }

}  // namespace

std::shared_ptr<const Spectral> Spectral::for_grid(const Grid& grid) {
  // Construct the planner mutex before the cache so it outlives cached plans.
  planner_mutex();
  static std::mutex cache_mutex;
  static std::map<ShapeKey, std::shared_ptr<const Spectral>> cache;
  const auto key = key_of(grid);
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto s = std::make_shared<const Spectral>(grid);
  cache.emplace(key, s);
  return s;
}

Spectral::Spectral(const Grid& grid) : grid_(grid) {
  const std::size_t n = grid_.size();
  std::vector<int> dims;
  for (const auto& ax : grid_.axes()) dims.push_back(static_cast<int>(ax.points));

  {
    std::lock_guard lock(planner_mutex());
    auto* buf = fftw_alloc_complex(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                                  FFTW_FORWARD, flags);
    backward_plan_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                                   FFTW_BACKWARD, flags);
    fftw_free(buf);
  }
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) {
    throw ConfigurationError("failed to create FFT plans");
  }

  k_.assign(grid_.dim(), std::vector<double>(n));
  kd_.assign(grid_.dim(), std::vector<double>(n));
  k2_.assign(n, 0.0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    const auto idx = grid_.unravel(flat);
    for (std::size_t a = 0; a < grid_.dim(); ++a) {
      const double k = grid_.wavenumber(a, idx[a]);
      k_[a][flat] = k;
      kd_[a][flat] = (idx[a] == grid_.axis(a).points / 2) ? 0.0 : k;
      k2_[flat] += k * k;
    }
  }
}

Spectral::~Spectral() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(as_plan(forward_plan_));
  fftw_destroy_plan(as_plan(backward_plan_));
}

void Spectral::forward(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != grid_.size() || out.size() != grid_.size()) {
    throw ShapeError("FFT buffer size does not match grid");
  }
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(as_plan(forward_plan_), p, p);
}

void Spectral::backward(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != grid_.size() || out.size() != grid_.size()) {
    throw ShapeError("FFT buffer size does not match grid");
  }
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(as_plan(backward_plan_), p, p);
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (auto& v : out) v *= scale;
}

}  // namespace nlqm
