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

// Command line front end: run, sweep and verify.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nlqm/acceptance.hpp"
#include "nlqm/experiment.hpp"

namespace {

bool parse_values(const std::string& text, std::vector<double>& out) {
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      return false;
    }
    if (used != item.size()) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for generalized (non)linear quantum mechanics"};
  app.require_subcommand(1);

  nlqm::RunOptions options;
  std::string out_dir;
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--workers", options.workers, "Concurrent sweep members")->check(CLI::PositiveNumber);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config_path, "Config file")->required();

  std::string parameter;
  std::string values_text;
  auto* sweep = app.add_subcommand("sweep", "Run a config once per parameter value");
  sweep->add_option("config", config_path, "Config file")->required();
  sweep->add_option("--param", parameter, "Dotted path of a numeric config field")->required();
  sweep->add_option("--values", values_text, "Comma-separated values")->required();

  std::vector<int> only;
  std::string tamper;
  double tamper_factor = 1.1;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, nlqm::acceptance::kCriterionCount));
  verify->add_option("--tamper", tamper, "Scale one dictionary coefficient (mutation check)");
  verify->add_option("--tamper-factor", tamper_factor, "Factor used by --tamper");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nlqm::kExitConfig;
  }
  if (!out_dir.empty()) options.out_dir = out_dir;

  if (*run) return nlqm::run_command(config_path, options, std::cout);
  if (*sweep) {
    std::vector<double> values;
    if (!parse_values(values_text, values)) {
      std::cout << "config error: cannot parse --values '" << values_text << "'\n";
      return nlqm::kExitConfig;
    }
    return nlqm::sweep_command(config_path, parameter, values, options, std::cout);
  }
  nlqm::acceptance::Options acc;
  acc.only.insert(only.begin(), only.end());
  if (!tamper.empty()) {
    try {
      acc.dictionary = nlqm::acceptance::scaled_dictionary(tamper, tamper_factor);
    } catch (const std::exception& e) {
      std::cout << "config error: " << e.what() << "\n";
      return nlqm::kExitConfig;
    }
  }
  return nlqm::acceptance::verify_command(acc, options, std::cout);
}
