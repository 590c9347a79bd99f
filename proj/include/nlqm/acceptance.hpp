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

#ifndef NLQM_ACCEPTANCE_HPP
#define NLQM_ACCEPTANCE_HPP

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "nlqm/dynamics.hpp"
#include "nlqm/experiment.hpp"

namespace nlqm::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Options {
  /// Dictionary handed to the linearizability criteria; empty means the
  /// built-in one. Replacing it is how the mutation check is exercised.
  CoefficientDictionary dictionary;
  /// Criteria to run; empty means all.
  std::set<int> only;
};

inline constexpr int kCriterionCount = 9;

CriterionResult run_criterion(int id, const Options& options);
/// Runs the selected criteria in order, printing one line per criterion to
/// `out` as each finishes.
std::vector<CriterionResult> run_all(const Options& options, std::ostream& out);

std::string format_line(const CriterionResult& r);

/// Dictionary with one coefficient scaled by `factor`.
CoefficientDictionary scaled_dictionary(const std::string& coefficient, double factor);

/// The `verify` command: checks that the output directory is writable
/// (exit 2 otherwise), runs the suite, writes a report, exits 0 or 1.
int verify_command(const Options& options, const RunOptions& run, std::ostream& out);

}  // namespace nlqm::acceptance

#endif  // NLQM_ACCEPTANCE_HPP
