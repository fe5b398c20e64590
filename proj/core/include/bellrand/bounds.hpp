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

#include <optional>
#include <string>

namespace bellrand {

/// Tail probability of a sequential strategy beating its per-round mean by
/// margin delta over N rounds, for scores with range [-K, K]:
/// exp(-N delta^2 / (8 K^2)).
double azuma_tail_bound(double rounds, double delta, double score_range);

/// Upper bound on the quantum value of the guessing game with penalty K for
/// an alphabet-n base game: 4 n / sqrt(K).
double gk_value_bound(int n, double penalty);

/// The penalty that balances the violation margin against the guessing-game
/// value bound: K = (8 n / delta)^2, at which delta - 4 n / sqrt(K) = delta/2.
double optimal_k(int n, double delta);

/// Probability that the devices and the mirror both pass and the mirror
/// reproduces the raw outputs: exp(-N delta^6 / (2^17 n^4)). Identical to
/// azuma_tail_bound(N, delta/2, optimal_k(n, delta)), which the tests check.
double guessing_event_bound(double rounds, double delta, int n);

/// Distance-from-uniform bound for the extracted bits:
/// 2^(J/2) * exp(-N delta^6 / (2^18 n^4)); the square of this bound equals
/// 2^J * guessing_event_bound.
double main_theorem_bound(double rounds, double delta, int n, double j_bits);

enum class Verdict { kHolds, kViolated, kVacuous };
std::string to_string(Verdict v);

/// One bound pitted against one measurement.
struct BoundReport {
  std::string name;
  // Parameters, where applicable (negative = not applicable).
  double rounds = -1, delta = -1, penalty = -1, j_bits = -1;
  int n = -1;

  double bound = 0;
  double measured = 0;
  // Confidence interval of the measurement, when it is a Monte-Carlo
  // estimate; exact measurements leave it empty.
  std::optional<double> ci_lo, ci_hi;
  std::size_t trials = 0;

  /// Largest value the measured quantity can take (1 for probabilities,
  /// 2 for trace-norm distances); a bound at or above it is vacuous.
  double trivial_max = 1.0;

  Verdict verdict = Verdict::kHolds;
};

/// Applies the verdict rule: vacuous when bound >= trivial_max (within
/// tolerance); violated only when the measurement, lowered by its confidence
/// margin, still exceeds the bound.
BoundReport compare(BoundReport report);

}  // namespace bellrand
