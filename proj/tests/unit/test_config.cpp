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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlqm/config.hpp"
#include "nlqm/errors.hpp"
#include "nlqm/field_core.hpp"
#include "nlqm/observables.hpp"

using namespace nlqm;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigurationError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"({
  "kind": "linear_benchmark",
  "grid": {"points": 64, "length": 16},
  "state": {"family": "gaussian", "width": 1},
  "time": {"t_final": 0.1}
})";

}  // namespace

TEST_CASE("bundled configs round-trip through the canonical form") {
  for (const auto& entry : std::filesystem::directory_iterator(NLQM_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const auto first = parse_config(read_file(entry.path()));
    const auto text = serialize_config(first);
    const auto second = parse_config(text);
    CHECK(serialize_config(second) == text);
    CHECK(to_json(second) == to_json(first));
  }
}

TEST_CASE("minimal config and defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.kind == ExperimentKind::linear_benchmark);
  CHECK(c.grid.points == 64);
  CHECK(c.mass == 1.0);
  CHECK(c.time.dt == 1e-3);
  CHECK(c.node_floor == 1e-12);
  CHECK(c.coefficients.is_linear());
}

TEST_CASE("schema violations are errors with locations") {
  SUBCASE("unknown key") {
    const auto e = error_of(R"({
  "kind": "linear_benchmark",
  "grid": {"points": 64, "length": 16},
  "state": {"family": "gaussian", "widht": 1},
  "time": {"t_final": 0.1}
})");
    CHECK(e.find("state.widht") != std::string::npos);
    CHECK(e.find("line 4") != std::string::npos);
  }
  SUBCASE("malformed text") {
    const auto e = error_of("{\n  \"kind\": \"linear_benchmark\",\n  \"grid\": {\"points\": 64 \"length\": 8}\n}");
    CHECK(e.find("line 3") != std::string::npos);
  }
  SUBCASE("missing grid") {
    CHECK(error_of(R"({"kind": "linear_benchmark", "state": {"family": "gaussian"}, "time": {"t_final": 1}})")
              .find("grid") != std::string::npos);
  }
  SUBCASE("wrong type") {
    CHECK(error_of(R"({"kind": "linear_benchmark", "grid": {"points": "64", "length": 16},
                      "state": {"family": "gaussian"}, "time": {"t_final": 1}})")
              .find("grid.points") != std::string::npos);
  }
  SUBCASE("bad values") {
    CHECK_FALSE(error_of(R"({"kind": "linear_benchmark", "grid": {"points": 48, "length": 16},
                            "state": {"family": "gaussian"}, "time": {"t_final": 1}})").empty());
    CHECK_FALSE(error_of(R"({"kind": "linear_benchmark", "grid": {"dims": 2, "points": 16, "length": 16},
                            "state": {"family": "gaussian"}, "time": {"t_final": 1}})").empty());
    CHECK_FALSE(error_of(R"({"kind": "nonsense", "grid": {"points": 16, "length": 16}})").empty());
    CHECK_FALSE(error_of(R"({"kind": "linear_benchmark", "grid": {"points": 64, "length": 16}, "mass": -1,
                            "state": {"family": "gaussian"}, "time": {"t_final": 1}})").empty());
  }
  SUBCASE("sections that do not apply") {
    CHECK(error_of(R"({"kind": "linear_benchmark", "grid": {"points": 64, "length": 16},
                      "state": {"family": "gaussian"}, "time": {"t_final": 1},
                      "gisin": {"variants": []}})").find("gisin") != std::string::npos);
    CHECK_FALSE(error_of(R"({"kind": "linearizability", "grid": {"points": 64, "length": 16},
                            "state": {"family": "gaussian"}, "time": {"t_final": 1}})").empty());
  }
  SUBCASE("dt violating the kinetic bound") {
    CHECK_FALSE(error_of(R"({"kind": "linear_benchmark", "grid": {"points": 1024, "length": 10},
                            "state": {"family": "gaussian"}, "time": {"t_final": 1, "dt": 0.1}})").empty());
  }
}

TEST_CASE("state builders") {
  const Grid g = Grid::line(256, 20.0);
  StateSpec s;
  s.width = 1.2;
  s.k0 = 2.0 * 3.141592653589793 * 2 / 20.0;
  CHECK(norm(s.build(g, 0)) == doctest::Approx(1.0).epsilon(1e-13));

  StateSpec pw;
  pw.family = StateSpec::Family::plane_wave;
  const auto d = density(pw.build(g, 0));
  for (double v : d.values) CHECK(v == doctest::Approx(1.0 / 20.0).epsilon(1e-12));

  StateSpec r;
  r.family = StateSpec::Family::random;
  CHECK(r.build(g, 4).values == r.build(g, 4).values);
  CHECK(r.build(g, 4).values != r.build(g, 5).values);

  StateSpec two;
  two.family = StateSpec::Family::two_particle;
  two.pairing = StateSpec::Pairing::entangled;
  StateSpec left, right;
  left.center = -3.0;
  right.center = 3.0;
  two.first = std::make_shared<StateSpec>(left);
  two.second = std::make_shared<StateSpec>(right);
  const Grid plane = Grid::plane({32, 16.0}, {32, 16.0});
  const auto psi = two.build(plane, 0);
  CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(is_entangled(psi));
  two.pairing = StateSpec::Pairing::product;
  CHECK_FALSE(is_entangled(two.build(plane, 0)));
}

TEST_CASE("potential builders") {
  const Grid g = Grid::line(16, 8.0);
  PotentialSpec h;
  h.kind = PotentialSpec::Kind::harmonic;
  h.omega = 2.0;
  h.center = 1.0;
  const auto v = h.build(g, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(v[i] == doctest::Approx(0.25 * 4.0 * std::pow(g.coordinate(0, i) - 1.0, 2)));
  }
  PotentialSpec w;
  w.kind = PotentialSpec::Kind::square_well;
  w.lo = -1.0;
  w.hi = 1.0;
  w.depth = 3.0;
  const auto wv = w.build(g, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    CHECK(wv[i] == (x >= -1.0 && x < 1.0 ? -3.0 : 0.0));
  }
  PotentialSpec t;
  t.kind = PotentialSpec::Kind::table;
  t.table = {{-1.0, 0.0}, {1.0, 2.0}};
  const auto tv = t.build(g, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    CHECK(tv[i] == doctest::Approx(std::clamp(x + 1.0, 0.0, 2.0)));
  }
  PotentialSpec z;
  CHECK(z.build(g, 1.0).empty());
}
