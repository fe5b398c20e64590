// Copyright 2026 The bellrand Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bellrand {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

// Property suites pinning the library's inequalities and identities on
// seeded random instances. Trial counts are parameters so the CLI can run
// them lighter than the acceptance suite does.

/// Purification marginals, PGM completeness, mirror identity, the guessing
/// bound, gentle measurement, and trace-norm metric axioms.
SuiteReport verify_linalg(std::uint64_t seed, int property_trials = 1000,
                          int mirror_trials = 100);

/// Game normalization, seesaw witnesses, the guessing-game value bound, and
/// the forced-classical chain.
SuiteReport verify_games(std::uint64_t seed, int chain_trials = 100,
                         int sweeps = 50);

/// Exhaustive two-universality, exact pair-uniformity, and pinned worked
/// examples of the hash arithmetic.
SuiteReport verify_hash(std::size_t max_v = 8);

/// Closed-form identities and monotonicity of the bound formulas.
SuiteReport verify_bounds();

std::vector<SuiteReport> verify_all(std::uint64_t seed);

}  // namespace bellrand
