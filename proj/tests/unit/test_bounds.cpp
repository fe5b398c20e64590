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

#include <doctest.h>

#include <cmath>

#include "bellrand/bounds.hpp"
#include "bellrand/constants.hpp"

using namespace bellrand;

TEST_CASE("tail bound pinned values") {
  CHECK(azuma_tail_bound(128, 0.5, 1) == doctest::Approx(std::exp(-4.0)));
  CHECK(azuma_tail_bound(128, 0.5, 1) == doctest::Approx(0.018316).epsilon(1e-4));
  CHECK(azuma_tail_bound(1000, 0.0, 1) == 1.0);
  // Doubling the rounds squares the bound.
  const double one = azuma_tail_bound(500, 0.25, 2);
  CHECK(azuma_tail_bound(1000, 0.25, 2) == doctest::Approx(one * one));
}

TEST_CASE("guessing-game value bound pinned values") {
  CHECK(gk_value_bound(2, 256) == doctest::Approx(0.5));
  CHECK(gk_value_bound(2, 64) == doctest::Approx(1.0));
  double prev = gk_value_bound(2, 1);
  for (double k = 2; k < 1e6; k *= 4) {
    CHECK(gk_value_bound(2, k) < prev);
    prev = gk_value_bound(2, k);
  }
}

TEST_CASE("balancing penalty and its residual margin") {
  CHECK(optimal_k(2, 0.1) == doctest::Approx(25600.0));
  CHECK(optimal_k(2, 1.0) == doctest::Approx(256.0));
  for (const double delta : {0.02, 0.1, 0.37, 1.0}) {
    const double k = optimal_k(2, delta);
    CHECK(delta - gk_value_bound(2, k) == doctest::Approx(delta / 2));
  }
}

TEST_CASE("explicit exponent of the guessing-event bound") {
  // N (delta/2)^2 / (8 K^2) with K = (8n/delta)^2 collapses to
  // N delta^6 / (2^17 n^4); check both the identity and a literal value.
  for (const double delta : {0.05, 0.1, 0.2}) {
    for (const int n : {2, 3, 5}) {
      const double composed = azuma_tail_bound(1000, delta / 2, optimal_k(n, delta));
      const double direct = guessing_event_bound(1000, delta, n);
      CHECK(std::abs(direct - composed) / composed <= tol::bound_identity);
    }
  }
  CHECK(guessing_event_bound(131072.0 * 16.0, 1.0, 2) ==
        doctest::Approx(std::exp(-1.0)));
  CHECK(guessing_event_bound(0, 0.1, 2) == 1.0);
}

TEST_CASE("final bound squares to the hash-weighted guessing bound") {
  for (const double j : {0.0, 1.0, 5.0, 32.0}) {
    for (const double delta : {0.1, 0.5}) {
      const double m = main_theorem_bound(5000, delta, 2, j);
      const double rhs = std::exp2(j) * guessing_event_bound(5000, delta, 2);
      CHECK(std::abs(m * m - rhs) / rhs <= tol::bound_identity);
    }
  }
  CHECK(main_theorem_bound(100, 0.3, 2, 0) ==
        doctest::Approx(std::exp(-100 * std::pow(0.3, 6) / (262144.0 * 16))));
}

TEST_CASE("vanishing regime: J linear in N with a small enough rate") {
  // With c below (2/ln2) delta^6 / (2^18 n^4), the bound decays to zero.
  const double delta = 0.5, n = 2;
  const double c = 0.5 * (2.0 / std::log(2.0)) * std::pow(delta, 6) /
                   (262144.0 * 16.0);
  double prev = 2;
  for (double rounds = 1e6; rounds <= 1e8; rounds *= 10) {
    const double bound =
        main_theorem_bound(rounds, delta, 2, std::floor(c * rounds));
    CHECK(bound < prev);
    prev = bound;
  }
  CHECK(prev < 1e-6);
  (void)n;
}

TEST_CASE("verdicts: holds, violated, vacuous") {
  BoundReport r;
  r.name = "test";
  r.trivial_max = 2.0;
  r.bound = 2.0;  // at the trivial maximum: vacuous
  r.measured = 0.1;
  CHECK(compare(r).verdict == Verdict::kVacuous);

  r.bound = 1.0;
  CHECK(compare(r).verdict == Verdict::kHolds);

  r.measured = 1.5;
  CHECK(compare(r).verdict == Verdict::kViolated);

  // Confidence intervals shield borderline Monte-Carlo estimates.
  r.measured = 1.1;
  r.ci_lo = 0.9;
  r.ci_hi = 1.3;
  CHECK(compare(r).verdict == Verdict::kHolds);
  r.ci_lo = 1.05;
  CHECK(compare(r).verdict == Verdict::kViolated);

  CHECK(to_string(Verdict::kVacuous) == "vacuous");
}

TEST_CASE("small-round final bound is vacuous against the trace-distance cap") {
  BoundReport r;
  r.name = "final-state";
  r.rounds = 2;
  r.delta = 0.1;
  r.n = 2;
  r.j_bits = 2;
  r.bound = main_theorem_bound(2, 0.1, 2, 2);
  r.measured = 0.0;
  r.trivial_max = 2.0;
  CHECK(compare(r).verdict == Verdict::kVacuous);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(azuma_tail_bound(-1, 0.1, 1));
  CHECK_THROWS(gk_value_bound(1, 4));
  CHECK_THROWS(optimal_k(2, 0));
  CHECK_THROWS(optimal_k(2, 1.5));
  CHECK_THROWS(main_theorem_bound(10, 0.1, 2, -1));
}
