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
#include <span>
#include <vector>

#include "bellrand/linalg.hpp"
#include "bellrand/rational.hpp"

namespace bellrand {

/// 2-player game in normalized form: all input and output alphabets are
/// {0..n-1}, inputs uniform, scores in [-1, 1], optimal classical score 0.
/// Scores are exact rationals; floating point enters only at evaluation.
class BellGame {
 public:
  BellGame(int n, std::vector<Rational> score_table);

  int n() const { return n_; }
  const Rational& score(int x, int y, int s, int t) const {
    return table_[static_cast<std::size_t>(((x * n_ + y) * n_ + s) * n_ + t)];
  }
  double score_d(int x, int y, int s, int t) const {
    return score(x, y, s, t).to_double();
  }
  const std::vector<Rational>& table() const { return table_; }

 private:
  int n_;
  std::vector<Rational> table_;
};

/// 3-player immunization of a Bell game: inputs (x, y, (x,y)) with (x,y)
/// uniform, outputs (s, t, s'); the score is the base score when s' = s and
/// -K otherwise. Eve's input (x,y) is encoded as x*n + y.
class GuessingGame {
 public:
  GuessingGame(BellGame base, Rational penalty);

  const BellGame& base() const { return base_; }
  const Rational& penalty() const { return penalty_; }
  int n() const { return base_.n(); }
  Rational score(int x, int y, int s, int t, int s_prime) const {
    return s == s_prime ? base_.score(x, y, s, t) : -penalty_;
  }

 private:
  BellGame base_;
  Rational penalty_;
};

/// CHSH in normalized form: n = 2, score 1/3 on s ⊕ t = x ∧ y, score -1
/// otherwise. Classical value 0, quantum value (2 sqrt(2) - 2)/6.
BellGame make_chsh_bell_game();

GuessingGame make_guessing_game(const BellGame& g, const Rational& penalty);

/// Per-player output functions; outputs[p][i] is player p's answer to its
/// input i (Eve's inputs in a guessing game are the n^2 encoded pairs).
struct DeterministicStrategy {
  std::vector<std::vector<int>> outputs;
};

/// Exact optimal expected score over deterministic strategies.
Rational classical_value(const BellGame& g);
Rational classical_value(const GuessingGame& g);

/// Shared state on a tensor product (one factor per player) together with a
/// measurement family per player: measurements[p][input] is a POVM on factor
/// p with outcomes 0..n-1.
struct QuantumStrategy {
  DensityOperator state;
  std::vector<Eigen::Index> factor_dims;
  std::vector<std::vector<Povm>> measurements;
};

double expected_score(const BellGame& g, const QuantumStrategy& strategy);
double expected_score(const GuessingGame& g, const QuantumStrategy& strategy);

/// Embeds a deterministic strategy as dimension-1 commuting projectors.
QuantumStrategy embed_deterministic(int players, std::span<const int> input_sizes,
                                    int n, const DeterministicStrategy& det);

/// The pinned optimal CHSH strategy: shared state (|00> + |11>)/sqrt(2);
/// Alice measures the computational basis (x = 0) or the Hadamard basis
/// (x = 1); Bob measures the computational basis rotated by pi/8 (y = 0) or
/// by -pi/8 (y = 1). Expected CHSH score (2 sqrt(2) - 2)/6 = 0.1380711...
QuantumStrategy tsirelson_chsh_strategy();

/// The best classical CHSH strategy (all outputs 0) embedded as projectors.
QuantumStrategy classical_best_chsh_strategy();

/// Maximally mixed shared qubits with computational-basis measurements for
/// every input: outputs are uniform coin flips that the purifying side can
/// copy perfectly.
QuantumStrategy maximally_mixed_copyable_strategy();

struct SeesawOptions {
  int sweeps = 50;
  int restarts = 8;
  std::uint64_t seed = 1;
};

struct SeesawResult {
  double best_score = 0;
  QuantumStrategy best_strategy;
  /// Per-restart, per-sweep scores (each nondecreasing).
  std::vector<std::vector<double>> trajectories;
};

/// Alternating-optimization lower bound on the quantum value: sweeps cycle
/// through a shared-state update (top eigenvector of the score operator) and
/// exact pairwise eigenvector updates of each player's POVM elements.
/// Deterministic given the seed; restarts are independent derived streams.
SeesawResult seesaw_lower_bound(const BellGame& g,
                                std::span<const Eigen::Index> dims,
                                const SeesawOptions& opts);
SeesawResult seesaw_lower_bound(const GuessingGame& g,
                                std::span<const Eigen::Index> dims,
                                const SeesawOptions& opts);

/// Runs the pre-measurement process in which Alice measures all of her
/// inputs in order before the referee's choice, so that her behaviour is
/// classical. Returns the scores of the original and processed strategies,
/// the per-input disagreement probabilities of Eve's guess, and the
/// disturbance bound Σ_x 4 sqrt(δ_x). Throws if the inequality chain
///   |original - process| <= bound  and  process <= 0
/// fails beyond tolerance, which would signal a computation bug.
struct ForcedClassicalResult {
  double original_score = 0;
  double process_score = 0;
  std::vector<double> delta_x;
  double bound = 0;
};
ForcedClassicalResult forced_classical_process(const BellGame& g,
                                               const QuantumStrategy& gk_strategy);

}  // namespace bellrand
