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

#ifndef NLQM_EXPERIMENT_HPP
#define NLQM_EXPERIMENT_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "nlqm/config.hpp"
#include "nlqm/dynamics.hpp"

namespace nlqm {

enum class Verdict { pass, fail, blowup };

const char* to_string(Verdict v);

/// Exit status contract of the command line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowup = 3;

int exit_code(Verdict v);

struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Header row, then one line per row; numbers as %.15g.
  std::string to_csv() const;
};

struct ExperimentResult {
  Verdict verdict = Verdict::fail;
  double statistic = 0.0;
  nlohmann::json statistics = nlohmann::json::object();
  SeriesTable series;
  std::optional<BlowupDiagnostic> blowup;
};

/// Runs the configured experiment in memory. Throws ConfigurationError when
/// the config is valid JSON but the experiment cannot be set up.
ExperimentResult execute(const ExperimentConfig& config);

std::string format_double(double v);
std::string sha256_hex(std::string_view data);
/// SHA-1 of "blob <size>\0<data>", the digest git assigns to file content.
std::string git_blob_sha1(std::string_view data);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Replaces the scalar at a dotted path (e.g. "coefficients.mu2",
/// "time.dt", "mixture.durations.1") in the canonical form and re-validates.
/// Non-scalar or missing targets are ConfigError.
ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& path,
                                double value);

struct RunOptions {
  std::optional<std::string> out_dir;
  std::size_t workers = 1;
};

int run_command(const std::string& config_path, const RunOptions& options, std::ostream& log);
int sweep_command(const std::string& config_path, const std::string& parameter,
                  const std::vector<double>& values, const RunOptions& options, std::ostream& log);

}  // namespace nlqm

#endif  // NLQM_EXPERIMENT_HPP
