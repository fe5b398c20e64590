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

#include "bellrand/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "bellrand/constants.hpp"

namespace bellrand {

double azuma_tail_bound(double rounds, double delta, double score_range) {
  if (rounds < 0 || delta < 0 || score_range <= 0)
    throw std::invalid_argument("azuma_tail_bound: bad parameters");
  return std::exp(-rounds * delta * delta / (8.0 * score_range * score_range));
}

double gk_value_bound(int n, double penalty) {
  if (n < 2 || penalty <= 0)
    throw std::invalid_argument("gk_value_bound: bad parameters");
  return 4.0 * static_cast<double>(n) / std::sqrt(penalty);
}

double optimal_k(int n, double delta) {
  if (n < 2 || delta <= 0 || delta > 1)
    throw std::invalid_argument("optimal_k: need n >= 2 and 0 < delta <= 1");
  const double ratio = 8.0 * static_cast<double>(n) / delta;
  return ratio * ratio;
}

double guessing_event_bound(double rounds, double delta, int n) {
  if (rounds < 0 || delta <= 0 || n < 2)
    throw std::invalid_argument("guessing_event_bound: bad parameters");
  const double n4 = std::pow(static_cast<double>(n), 4);
  return std::exp(-rounds * std::pow(delta, 6) / (131072.0 * n4));  // 2^17
}

double main_theorem_bound(double rounds, double delta, int n, double j_bits) {
  if (j_bits < 0)
    throw std::invalid_argument("main_theorem_bound: bad output size");
  const double n4 = std::pow(static_cast<double>(n), 4);
  return std::exp2(j_bits / 2.0) *
         std::exp(-rounds * std::pow(delta, 6) / (262144.0 * n4));  // 2^18
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds:
      return "holds";
    case Verdict::kViolated:
      return "violated";
    case Verdict::kVacuous:
      return "vacuous";
  }
  return "?";
}

BoundReport compare(BoundReport report) {
  if (report.ci_lo.has_value() != report.ci_hi.has_value())
    throw std::invalid_argument("compare: half-specified confidence interval");
  if (report.bound >= report.trivial_max - tol::inequality) {
    report.verdict = Verdict::kVacuous;
    return report;
  }
  // For Monte-Carlo estimates only a measurement whose lower confidence edge
  // clears the bound counts as a violation.
  const double floor_value = report.ci_lo.value_or(report.measured);
  report.verdict = (floor_value > report.bound + tol::inequality)
                       ? Verdict::kViolated
                       : Verdict::kHolds;
  return report;
}

}  // namespace bellrand
