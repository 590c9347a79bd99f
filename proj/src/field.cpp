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

#include "nlqm/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "nlqm/errors.hpp"

namespace nlqm {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2) {
    throw ConfigurationError("grid dimension must be 1 or 2, got " +
                             std::to_string(axes_.size()));
  }
  for (const auto& ax : axes_) {
    if (ax.points < 8 || !is_power_of_two(ax.points)) {
      throw ConfigurationError("points per axis must be a power of two >= 8, got " +
                               std::to_string(ax.points));
    }
    if (!(ax.length > 0.0) || !std::isfinite(ax.length)) {
      throw ConfigurationError("box length must be positive and finite");
    }
  }
}

Grid Grid::line(std::size_t points, double length) { return Grid({Axis{points, length}}); }

Grid Grid::plane(Axis first, Axis second) { return Grid({first, second}); }

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (const auto& ax : axes_) n *= ax.points;
  return axes_.empty() ? 0 : n;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (const auto& ax : axes_) v *= ax.spacing();
  return v;
}

double Grid::momentum_cell_volume() const {
  double v = 1.0;
  for (const auto& ax : axes_) v *= 2.0 * std::numbers::pi / ax.length;
  return v;
}

double Grid::coordinate(std::size_t a, std::size_t i) const {
  const auto& ax = axes_.at(a);
  return -0.5 * ax.length + static_cast<double>(i) * ax.spacing();
}

double Grid::wavenumber(std::size_t a, std::size_t i) const {
  const auto& ax = axes_.at(a);
  const auto n = static_cast<std::ptrdiff_t>(ax.points);
  auto j = static_cast<std::ptrdiff_t>(i);
  if (j >= n / 2) j -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(j) / ax.length;
}

double Grid::max_wavenumber_squared() const {
  double k2 = 0.0;
  for (const auto& ax : axes_) {
    const double kn = std::numbers::pi / ax.spacing();
    k2 += kn * kn;
  }
  return k2;
}

std::array<std::size_t, 2> Grid::unravel(std::size_t flat) const {
  if (dim() == 1) return {flat, 0};
  const std::size_t n1 = axes_[1].points;
  return {flat / n1, flat % n1};
}

std::size_t Grid::stride(std::size_t a) const {
  if (dim() == 2 && a == 0) return axes_[1].points;
  return 1;
}

Wavefunction::Wavefunction(Grid g, double t)
    : grid(std::move(g)), values(grid.size(), Complex{0.0, 0.0}), time(t) {}

Wavefunction::Wavefunction(Grid g, std::vector<Complex> v, double t)
    : grid(std::move(g)), values(std::move(v)), time(t) {
  if (values.size() != grid.size()) {
    throw ShapeError("wavefunction has " + std::to_string(values.size()) +
                     " values for a grid of " + std::to_string(grid.size()) + " points");
  }
}

RealField::RealField(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}

RealField::RealField(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ShapeError("field has " + std::to_string(values.size()) + " values for a grid of " +
                     std::to_string(grid.size()) + " points");
  }
}

Region::Region(Space space, std::size_t dim) : space_(space), dim_(dim) {
  if (dim_ < 1 || dim_ > 2) throw ConfigurationError("region dimension must be 1 or 2");
}

Region Region::whole(std::size_t dim, Space space) {
  Region r(space, dim);
  r.add(std::vector<Interval>(dim, Interval{}));
  return r;
}

Region Region::interval(double lo, double hi, Space space) {
  Region r(space, 1);
  r.add({Interval{lo, hi}});
  return r;
}

Region Region::box(Interval first, Interval second, Space space) {
  Region r(space, 2);
  r.add({first, second});
  return r;
}

Region& Region::add(std::vector<Interval> box) {
  if (box.size() != dim_) throw ShapeError("region box dimension mismatch");
  for (const auto& iv : box) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi) {
      throw DomainError("region interval must satisfy lo <= hi");
    }
  }
  boxes_.push_back(std::move(box));
  return *this;
}

std::vector<char> Region::mask(const Grid& grid) const {
  if (grid.dim() != dim_) throw ShapeError("region and grid dimensions differ");
  std::vector<char> m(grid.size(), 0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unravel(flat);
    for (const auto& box : boxes_) {
      bool inside = true;
      for (std::size_t a = 0; a < dim_ && inside; ++a) {
        const double c = space_ == Space::position ? grid.coordinate(a, idx[a])
                                                   : grid.wavenumber(a, idx[a]);
        inside = box[a].contains(c);
      }
      if (inside) {
        m[flat] = 1;
        break;
      }
    }
  }
  return m;
}

std::vector<double> Region::weights(const Grid& grid) const {
  if (grid.dim() != dim_) throw ShapeError("region and grid dimensions differ");
  std::vector<double> w(grid.size(), 0.0);
  std::vector<double> cell(dim_);
  for (std::size_t a = 0; a < dim_; ++a) {
    cell[a] = space_ == Space::position ? grid.axis(a).spacing()
                                        : 2.0 * std::numbers::pi / grid.axis(a).length;
  }
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unravel(flat);
    double total = 0.0;
    for (const auto& box : boxes_) {
      double f = 1.0;
      for (std::size_t a = 0; a < dim_ && f > 0.0; ++a) {
        const double c = space_ == Space::position ? grid.coordinate(a, idx[a])
                                                   : grid.wavenumber(a, idx[a]);
        if (space_ == Space::position) {
          // Periodic: clip to the box, then count the overlap across the seam too.
          const double length = grid.axis(a).length;
          const double blo = std::max(box[a].lo, -0.5 * length);
          const double bhi = std::min(box[a].hi, 0.5 * length);
          double covered = 0.0;
          for (int n = -1; n <= 1; ++n) {
            const double lo = std::max(blo + n * length, c - 0.5 * cell[a]);
            const double hi = std::min(bhi + n * length, c + 0.5 * cell[a]);
            covered += std::max(0.0, hi - lo);
          }
          f *= covered / cell[a];
        } else {
          const double lo = std::max(box[a].lo, c - 0.5 * cell[a]);
          const double hi = std::min(box[a].hi, c + 0.5 * cell[a]);
          f *= std::max(0.0, hi - lo) / cell[a];
        }
      }
      total += f;
    }
    w[flat] = std::min(total, 1.0);
  }
  return w;
}

Region Region::scaled(double factor) const {
  Region r(space_, dim_);
  for (const auto& box : boxes_) {
    std::vector<Interval> s;
    s.reserve(box.size());
    for (const auto& iv : box) {
      double lo = iv.lo * factor;
      double hi = iv.hi * factor;
      if (lo > hi) std::swap(lo, hi);
      s.push_back({lo, hi});
    }
    r.add(std::move(s));
  }
  return r;
}

}  // namespace nlqm
