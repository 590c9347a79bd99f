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

#ifndef NLQM_GAUGE_SCHEDULE_HPP
#define NLQM_GAUGE_SCHEDULE_HPP

#include <utility>
#include <vector>

namespace nlqm {

/// Time-dependent gauge parameter gamma_t, stored either as a constant or as
/// piecewise-linear breakpoints (t_i, gamma_i). gamma_dot is the slope of the
/// segment containing t (right-continuous at breakpoints) and zero outside
/// the breakpoint range, where gamma is held at the end values.
class GaugeSchedule {
 public:
  GaugeSchedule() = default;

  static GaugeSchedule constant(double gamma);
  static GaugeSchedule piecewise_linear(std::vector<std::pair<double, double>> breakpoints);

  double gamma(double t) const;
  double gamma_dot(double t) const;

  bool is_constant() const { return breakpoints_.size() == 1; }
  const std::vector<std::pair<double, double>>& breakpoints() const { return breakpoints_; }

  bool operator==(const GaugeSchedule&) const = default;

 private:
  std::vector<std::pair<double, double>> breakpoints_{{0.0, 0.0}};
};

}  // namespace nlqm

#endif  // NLQM_GAUGE_SCHEDULE_HPP
