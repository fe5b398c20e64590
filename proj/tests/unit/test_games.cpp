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

#include <array>

#include "bellrand/games.hpp"

using namespace bellrand;

namespace {

const double kTsirelsonScore = (2.0 * std::sqrt(2.0) - 2.0) / 6.0;

QuantumStrategy random_three_player(SplitMix64& rng) {
  QuantumStrategy s;
  s.factor_dims = {2, 2, 2};
  s.state = random_density(rng, 8);
  std::vector<Povm> alice, bob, eve;
  for (int i = 0; i < 2; ++i) alice.push_back(random_projective_povm(rng, 2, 2));
  for (int i = 0; i < 2; ++i) bob.push_back(random_projective_povm(rng, 2, 2));
  for (int i = 0; i < 4; ++i) eve.push_back(random_projective_povm(rng, 2, 2));
  s.measurements = {alice, bob, eve};
  return s;
}

}  // namespace

TEST_CASE("normalized CHSH table and exact classical value") {
  const BellGame chsh = make_chsh_bell_game();
  CHECK(chsh.n() == 2);
  // Affine rescaling: winning pairs score 1/3, losing pairs -1.
  CHECK(chsh.score(0, 0, 0, 0) == Rational(1, 3));
  CHECK(chsh.score(1, 1, 0, 0) == Rational(-1));  // s^t = 0 != x&y = 1
  CHECK(chsh.score(1, 1, 0, 1) == Rational(1, 3));
  // Enumeration of all 16 deterministic pairs gives exactly zero.
  CHECK(classical_value(chsh) == Rational(0));
}

TEST_CASE("constant game has zero classical value") {
  std::vector<Rational> zeros(16, Rational(0));
  const BellGame flat(2, std::move(zeros));
  CHECK(classical_value(flat) == Rational(0));
}

TEST_CASE("guessing game construction") {
  const BellGame chsh = make_chsh_bell_game();
  const GuessingGame gk = make_guessing_game(chsh, Rational(4));
  // Matching third output inherits the base score.
  CHECK(gk.score(0, 1, 1, 0, 1) == chsh.score(0, 1, 1, 0));
  // Mismatch pays the penalty.
  CHECK(gk.score(0, 1, 1, 0, 0) == Rational(-4));
  // The penalty domain is K >= 1.
  CHECK_THROWS(make_guessing_game(chsh, Rational(1, 2)));
  // Copying Eve makes the classical value equal to the base game's.
  CHECK(classical_value(gk) == Rational(0));
}

TEST_CASE("expected score of the pinned optimal strategy") {
  const BellGame chsh = make_chsh_bell_game();
  const double score = expected_score(chsh, tsirelson_chsh_strategy());
  CHECK(score == doctest::Approx(kTsirelsonScore).epsilon(1e-9));
  CHECK(score == doctest::Approx(0.138071).epsilon(1e-5));
}

TEST_CASE("uniformly random outputs score -1/3 on CHSH") {
  QuantumStrategy s;
  s.factor_dims = {2, 2};
  s.state = DensityOperator::maximally_mixed(4);
  std::vector<Matrix> coin = {0.5 * Matrix::Identity(2, 2),
                              0.5 * Matrix::Identity(2, 2)};
  const Povm flip = Povm::from_elements(std::move(coin));
  s.measurements = {{flip, flip}, {flip, flip}};
  CHECK(expected_score(make_chsh_bell_game(), s) ==
        doctest::Approx(-1.0 / 3).epsilon(1e-12));
}

TEST_CASE("deterministic strategies embed to their table value") {
  const BellGame chsh = make_chsh_bell_game();
  const std::array<int, 2> inputs = {2, 2};
  // The all-zeros strategy wins 3 of 4 input pairs: 3/4 * 1/3 - 1/4 = 0.
  DeterministicStrategy det{{{0, 0}, {0, 0}}};
  CHECK(expected_score(chsh, embed_deterministic(2, inputs, 2, det)) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // An anti-correlated pair loses the three equal-requirement pairs.
  DeterministicStrategy bad{{{0, 0}, {1, 1}}};
  CHECK(expected_score(chsh, embed_deterministic(2, inputs, 2, bad)) ==
        doctest::Approx((1.0 / 3 - 3.0) / 4).epsilon(1e-12));
}

TEST_CASE("strategy shape mismatches are rejected") {
  const BellGame chsh = make_chsh_bell_game();
  QuantumStrategy s = tsirelson_chsh_strategy();
  s.measurements[0].pop_back();
  CHECK_THROWS(expected_score(chsh, s));
}

TEST_CASE("seesaw reaches the CHSH quantum value and stays monotone") {
  const BellGame chsh = make_chsh_bell_game();
  const std::array<Eigen::Index, 2> dims = {2, 2};
  const SeesawResult r =
      seesaw_lower_bound(chsh, dims, SeesawOptions{50, 8, 424242});
  CHECK(r.best_score >= 0.1380);
  CHECK(r.best_score <= kTsirelsonScore + 1e-6);
  for (const auto& traj : r.trajectories)
    for (std::size_t i = 1; i < traj.size(); ++i)
      CHECK(traj[i] >= traj[i - 1] - 1e-9);
  // Deterministic given the seed.
  const SeesawResult again =
      seesaw_lower_bound(chsh, dims, SeesawOptions{50, 8, 424242});
  CHECK(r.best_score == again.best_score);
}

TEST_CASE("seesaw on a constant game returns zero") {
  std::vector<Rational> zeros(16, Rational(0));
  const BellGame flat(2, std::move(zeros));
  const std::array<Eigen::Index, 2> dims = {2, 2};
  const SeesawResult r = seesaw_lower_bound(flat, dims, SeesawOptions{5, 2, 3});
  CHECK(r.best_score == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("seesaw on the guessing game respects the value bound") {
  const BellGame chsh = make_chsh_bell_game();
  const GuessingGame gk = make_guessing_game(chsh, Rational(64));
  const std::array<Eigen::Index, 3> dims = {2, 2, 4};
  const SeesawResult r = seesaw_lower_bound(gk, dims, SeesawOptions{50, 4, 5});
  CHECK(r.best_score <= 4.0 * 2 / std::sqrt(64.0) + 1e-6);  // = 1.0
}

TEST_CASE("random guessing-game strategies satisfy the value bound") {
  SplitMix64 rng(21);
  const BellGame chsh = make_chsh_bell_game();
  for (const std::int64_t k : {16, 64, 256}) {
    const GuessingGame gk = make_guessing_game(chsh, Rational(k));
    const double bound = 4.0 * 2 / std::sqrt(static_cast<double>(k));
    for (int trial = 0; trial < 20; ++trial) {
      const QuantumStrategy s = random_three_player(rng);
      const double score = expected_score(gk, s);
      CHECK(score <= bound + tol::inequality);
      CHECK(score >= -static_cast<double>(k) - tol::inequality);
      CHECK(score <= 1 + tol::inequality);
    }
  }
}

TEST_CASE("forced classical process: zero-disturbance strategies") {
  // Alice deterministic via computational projectors, Eve holding a copy of
  // the basis state Alice measures: all disagreement probabilities vanish
  // and the process reproduces the original (classical) score.
  const BellGame chsh = make_chsh_bell_game();
  QuantumStrategy s;
  s.factor_dims = {2, 2, 2};
  Vector state = Vector::Zero(8);
  state(0) = 1;  // |000>
  s.state = DensityOperator::pure(state);
  Vector e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  std::vector<Matrix> comp = {e0 * e0.adjoint(), e1 * e1.adjoint()};
  const Povm computational = Povm::from_elements(comp);
  s.measurements = {{computational, computational},
                    {computational, computational},
                    {computational, computational, computational,
                     computational}};
  const auto r = forced_classical_process(chsh, s);
  for (const double d : r.delta_x) CHECK(d == doctest::Approx(0.0));
  CHECK(r.bound == doctest::Approx(0.0));
  CHECK(r.process_score ==
        doctest::Approx(r.original_score).epsilon(1e-12));
  CHECK(r.process_score <= tol::inequality);
}

TEST_CASE("forced classical process on the optimal strategy with a blind Eve") {
  // Tsirelson devices extended by an Eve who measures a fresh |0>: she
  // agrees with Alice's uniform outcome half the time, so delta_x = 1/2.
  const BellGame chsh = make_chsh_bell_game();
  const QuantumStrategy two = tsirelson_chsh_strategy();
  QuantumStrategy three;
  three.factor_dims = {2, 2, 2};
  Matrix eve_state = Matrix::Zero(2, 2);
  eve_state(0, 0) = 1;
  three.state = DensityOperator::from_matrix(
      kron(two.state.matrix(), eve_state));
  Vector e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  const Povm computational =
      Povm::from_elements({e0 * e0.adjoint(), e1 * e1.adjoint()});
  three.measurements = {two.measurements[0],
                        two.measurements[1],
                        {computational, computational, computational,
                         computational}};
  const auto r = forced_classical_process(chsh, three);
  CHECK(r.original_score ==
        doctest::Approx(kTsirelsonScore).epsilon(1e-9));
  for (const double d : r.delta_x) CHECK(d == doctest::Approx(0.5));
  CHECK(r.bound == doctest::Approx(8.0 * std::sqrt(0.5)).epsilon(1e-12));
  CHECK(r.process_score <= tol::inequality);
  CHECK(std::abs(r.original_score - r.process_score) <=
        r.bound + tol::inequality);
}

TEST_CASE("forced classical process rejects non-projective Alice") {
  const BellGame chsh = make_chsh_bell_game();
  QuantumStrategy s;
  s.factor_dims = {2, 2, 2};
  s.state = DensityOperator::maximally_mixed(8);
  std::vector<Matrix> fuzzy = {0.5 * Matrix::Identity(2, 2),
                               0.5 * Matrix::Identity(2, 2)};
  const Povm coin = Povm::from_elements(fuzzy);
  s.measurements = {{coin, coin}, {coin, coin}, {coin, coin, coin, coin}};
  CHECK_THROWS(forced_classical_process(chsh, s));
}

TEST_CASE("forced classical chain holds on random strategies") {
  SplitMix64 rng(22);
  const BellGame chsh = make_chsh_bell_game();
  for (int trial = 0; trial < 40; ++trial) {
    // forced_classical_process throws if the chain fails.
    const auto r = forced_classical_process(chsh, random_three_player(rng));
    CHECK(r.process_score <= tol::inequality);
    CHECK(std::abs(r.original_score - r.process_score) <=
          r.bound + tol::inequality);
  }
}
