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

// Runs every acceptance criterion and prints one line per criterion.

#include <iostream>

#include "nlqm/acceptance.hpp"

int main() {
  const auto results = nlqm::acceptance::run_all({}, std::cout);
  bool ok = results.size() == static_cast<std::size_t>(nlqm::acceptance::kCriterionCount);
  for (const auto& r : results) ok = ok && r.pass;
  std::cout << (ok ? "acceptance: all criteria passed" : "acceptance: FAILED") << '\n';
  return ok ? 0 : 1;
}
