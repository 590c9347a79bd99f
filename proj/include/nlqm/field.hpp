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

#ifndef NLQM_FIELD_HPP
#define NLQM_FIELD_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace nlqm {

using Complex = std::complex<double>;

/// One periodic axis: `points` samples over a box of length `length`.
struct Axis {
  std::size_t points = 0;
  double length = 0.0;

  double spacing() const { return length / static_cast<double>(points); }
  bool operator==(const Axis&) const = default;
};

/// Uniform periodic tensor grid in one or two dimensions.
///
/// Axis coordinates are x_i = -L/2 + i dx, i = 0..n-1, so the box is
/// [-L/2, L/2). Flat indices are row-major with axis 0 slowest. Wavenumbers
/// follow the FFT layout (non-negative first, then negative).
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<Axis> axes);

  static Grid line(std::size_t points, double length);
  static Grid plane(Axis first, Axis second);

  std::size_t dim() const { return axes_.size(); }
  const Axis& axis(std::size_t a) const { return axes_.at(a); }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const;

  double cell_volume() const;
  double momentum_cell_volume() const;

  double coordinate(std::size_t a, std::size_t i) const;
  double wavenumber(std::size_t a, std::size_t i) const;
  /// Largest |k|^2 representable on the grid (sum of per-axis Nyquist^2).
  double max_wavenumber_squared() const;

  /// Per-axis indices of a flat index. Unused trailing entries are zero.
  std::array<std::size_t, 2> unravel(std::size_t flat) const;
  std::size_t stride(std::size_t a) const;

  bool operator==(const Grid&) const = default;

 private:
  std::vector<Axis> axes_;
};

struct Wavefunction {
  Grid grid;
  std::vector<Complex> values;
  double time = 0.0;

  Wavefunction() = default;
  explicit Wavefunction(Grid g, double t = 0.0);
  Wavefunction(Grid g, std::vector<Complex> v, double t = 0.0);
};

/// Real scalar field on a grid; used for densities, functionals, potentials.
struct RealField {
  Grid grid;
  std::vector<double> values;

  RealField() = default;
  explicit RealField(Grid g);
  RealField(Grid g, std::vector<double> v);
};

using DensityField = RealField;

/// One real component per grid axis.
struct CurrentField {
  Grid grid;
  std::vector<std::vector<double>> components;
};

/// Momentum-representation amplitudes, scaled so that
/// sum |phi(k)|^2 dk = sum |psi(x)|^2 dx.
struct MomentumWavefunction {
  Grid grid;
  std::vector<Complex> values;
};

enum class Space { position, momentum };

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v >= lo && v < hi; }
  bool operator==(const Interval&) const = default;
};

/// Union of axis-aligned boxes in position or momentum space.
///
/// Two discretizations: mask() selects whole cells by their centers
/// (half-open on the upper side) and gives the projections; weights() gives
/// the covered fraction of each cell and enters every probability.
class Region {
 public:
  Region() = default;
  Region(Space space, std::size_t dim);

  static Region whole(std::size_t dim, Space space = Space::position);
  static Region interval(double lo, double hi, Space space = Space::position);
  static Region box(Interval first, Interval second, Space space = Space::position);

  Region& add(std::vector<Interval> box);

  Space space() const { return space_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::vector<Interval>>& boxes() const { return boxes_; }

  /// 1 for cells whose center lies in the region; used for projections.
  std::vector<char> mask(const Grid& grid) const;
  /// Fraction of each cell [c - h/2, c + h/2) covered by the region, for
  /// integrals over it. Position boxes are clipped to [-L/2, L/2) and the
  /// cell at -L/2 wraps across the periodic seam. Boxes are assumed disjoint.
  std::vector<double> weights(const Grid& grid) const;
  Region scaled(double factor) const;

  bool operator==(const Region&) const = default;

 private:
  Space space_ = Space::position;
  std::size_t dim_ = 1;
  std::vector<std::vector<Interval>> boxes_;
};

}  // namespace nlqm

#endif  // NLQM_FIELD_HPP
