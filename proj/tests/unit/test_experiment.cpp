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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nlqm/config.hpp"
#include "nlqm/errors.hpp"
#include "nlqm/experiment.hpp"

using namespace nlqm;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlqm_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Cli {
  int code;
  std::string output;
};

Cli cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "cli.log";
  const std::string cmd = std::string(NLQM_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(log)};
}

// Result files carry statistics as 15-digit decimal strings.
double statistic(const nlohmann::json& summary, std::size_t i) {
  return std::stod(summary.at("members").at(i).at("statistic").get<std::string>());
}

std::string config_path(const std::string& name) { return std::string(NLQM_CONFIG_DIR) + "/" + name; }

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST_CASE("number formatting and digests") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_double(1e-20) == "1e-20");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("atomic writes leave no temporaries") {
  const auto dir = scratch("atomic");
  write_atomic(dir / "a.txt", "hello\n");
  write_atomic(dir / "a.txt", "again\n");
  CHECK(read_file(dir / "a.txt") == "again\n");
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator()) == 1);
}

TEST_CASE("series tables") {
  SeriesTable t;
  t.columns = {"t", "x"};
  t.rows = {{0.0, 1.0 / 3.0}, {0.5, 2.0}};
  CHECK(t.to_csv() == "t,x\n0,0.333333333333333\n0.5,2\n");
}

TEST_CASE("parameter substitution") {
  const auto base = load_config(config_path("linearizability.json"));
  CHECK(with_parameter(base, "mass", 2.0).mass == 2.0);
  CHECK(with_parameter(base, "state.width", 0.9).state.width == 0.9);
  CHECK(with_parameter(base, "gauge_schedule.breakpoints.0.1", 0.3).gauge_schedule->gamma(0.0) == 0.3);
  CHECK_THROWS_AS(with_parameter(base, "state", 1.0), ConfigurationError);
  CHECK_THROWS_AS(with_parameter(base, "state.family", 1.0), ConfigurationError);
  CHECK_THROWS_AS(with_parameter(base, "no.such.field", 1.0), ConfigurationError);
  CHECK_THROWS_AS(with_parameter(base, "grid.points", 100.5), ConfigurationError);
}

TEST_CASE("experiments are deterministic") {
  const auto c = load_config(config_path("linearizability.json"));
  const auto a = execute(c);
  const auto b = execute(c);
  CHECK(a.verdict == Verdict::pass);
  CHECK(a.series.to_csv() == b.series.to_csv());
  CHECK(a.statistic <= 1e-4);
}

TEST_CASE("run command writes a complete result set") {
  const auto dir = scratch("run");
  const auto r = cli("--out " + (dir / "out").string() + " run " + config_path("free_gaussian.json"), dir);
  CHECK(r.code == 0);
  for (const char* ext : {".json", ".csv", ".gp"}) CHECK(fs::exists(dir / "out" / (std::string("free_gaussian") + ext)));
  const auto record = nlohmann::json::parse(read_file(dir / "out" / "free_gaussian.json"));
  CHECK(record.at("verdict") == "pass");
  CHECK(record.at("config_hash").get<std::string>().size() == 64);
  CHECK(record.at("columns").size() == 6);
  CHECK(read_file(dir / "out" / "free_gaussian.csv").rfind("t,width,analytic_width,relative_error,norm,energy\n", 0) ==
        0);
}

TEST_CASE("separate processes produce byte-identical series") {
  const auto dir = scratch("determinism");
  const std::string cfg = config_path("mixture.json");
  REQUIRE(cli("--out " + (dir / "a").string() + " run " + cfg, dir).code == 0);
  REQUIRE(cli("--out " + (dir / "b").string() + " run " + cfg, dir).code == 0);
  CHECK(read_file(dir / "a" / "mixture.csv") == read_file(dir / "b" / "mixture.csv"));
}

TEST_CASE("malformed config exits 2 without outputs") {
  const auto dir = scratch("malformed");
  write(dir / "bad.json", R"({"kind": "linear_benchmark", "state": {"family": "gaussian"}, "time": {"t_final": 1}})");
  const auto r = cli("--out " + (dir / "out").string() + " run " + (dir / "bad.json").string(), dir);
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK(cli("--out " + (dir / "out").string() + " run " + (dir / "missing.json").string(), dir).code == 2);
}

TEST_CASE("blow-up exits 3") {
  const auto dir = scratch("blowup");
  const auto r = cli("--out " + dir.string() + " run " + config_path("blowup_scan.json"), dir);
  CHECK(r.code == 3);
  CHECK(r.output.find("blow-up") != std::string::npos);
}

TEST_CASE("sweeps") {
  const auto dir = scratch("sweep");
  auto cfg = nlohmann::json::parse(read_file(config_path("linearizability.json")));
  cfg["grid"]["points"] = 128;
  write(dir / "lin.json", cfg.dump(2));
  const std::string out = "--out " + (dir / "out").string() + " --workers 2 ";

  SUBCASE("dt sweep shows second order") {
    const auto r = cli(out + "sweep " + (dir / "lin.json").string() + " --param time.dt --values 1e-2,5e-3,2.5e-3", dir);
    CHECK(r.code == 0);
    const auto summary = nlohmann::json::parse(read_file(dir / "out" / "summary.json"));
    REQUIRE(summary.at("members").size() == 3);
    const double s0 = statistic(summary, 0), s1 = statistic(summary, 1), s2 = statistic(summary, 2);
    CHECK(s0 / s1 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(s1 / s2 == doctest::Approx(4.0).epsilon(0.1));
    for (int i = 0; i < 3; ++i) CHECK(fs::exists(dir / "out" / ("lin_" + std::to_string(i) + ".json")));
    CHECK(fs::exists(dir / "out" / "summary.csv"));
  }
  SUBCASE("empty value list") {
    CHECK(cli(out + "sweep " + (dir / "lin.json").string() + " --param time.dt --values ''", dir).code == 2);
  }
  SUBCASE("non-scalar target") {
    CHECK(cli(out + "sweep " + (dir / "lin.json").string() + " --param state --values 1,2", dir).code == 2);
  }
}

TEST_CASE("gisin sweep over mu2 records the statistic") {
  const auto dir = scratch("gisin_sweep");
  auto cfg = nlohmann::json::parse(read_file(config_path("gisin.json")));
  cfg["grid"]["points"] = 32;
  cfg["time"]["t_final"] = 0.2;
  cfg["time"]["dt"] = 4e-3;
  write(dir / "g.json", cfg.dump(2));
  const auto r = cli("--out " + (dir / "out").string() + " sweep " + (dir / "g.json").string() +
                         " --param coefficients.mu2 --values 0,0.1,0.3",
                     dir);
  CHECK(r.code == 0);
  const auto summary = nlohmann::json::parse(read_file(dir / "out" / "summary.json"));
  CHECK(summary.contains("statistic_monotone"));
  CHECK(statistic(summary, 0) <= 1e-10);
  CHECK(statistic(summary, 2) > statistic(summary, 0));
}

TEST_CASE("verify command") {
  const auto dir = scratch("verify");
  SUBCASE("unwritable output directory") {
    write(dir / "file", "x");
    CHECK(cli("--out " + (dir / "file" / "sub").string() + " verify --only 2", dir).code == 2);
  }
  SUBCASE("selected criterion passes and writes a report") {
    const auto r = cli("--out " + (dir / "out").string() + " verify --only 2 9", dir);
    CHECK(r.code == 0);
    CHECK(r.output.find("criterion 2 (gauge-map properties): PASS") != std::string::npos);
    CHECK(r.output.find("criterion 9 (functional correctness): PASS") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "verify_report.json"));
  }
  SUBCASE("tampered dictionary fails linearizability") {
    const auto r = cli("--out " + (dir / "out").string() + " verify --only 3 --tamper mu2", dir);
    CHECK(r.code == 1);
    CHECK(r.output.find("criterion 3 (linearizability): FAIL") != std::string::npos);
  }
}
