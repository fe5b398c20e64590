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

#include "bellrand/games.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace bellrand {

namespace {

constexpr double kEnumerationBudget = 1e7;

Matrix hermitize_copy(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

// Uniform view of both game types for strategy evaluation and seesaw.
struct GameView {
  int players = 0;
  std::vector<int> input_sizes;
  std::vector<int> output_sizes;
  // Input tuples with positive probability, all equally likely.
  std::vector<std::vector<int>> inputs;
  std::function<double(std::span<const int>, std::span<const int>)> score;
};

GameView view_of(const BellGame& g) {
  GameView v;
  const int n = g.n();
  v.players = 2;
  v.input_sizes = {n, n};
  v.output_sizes = {n, n};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) v.inputs.push_back({x, y});
  v.score = [&g](std::span<const int> in, std::span<const int> out) {
    return g.score_d(in[0], in[1], out[0], out[1]);
  };
  return v;
}

GameView view_of(const GuessingGame& g) {
  GameView v;
  const int n = g.n();
  v.players = 3;
  v.input_sizes = {n, n, n * n};
  v.output_sizes = {n, n, n};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) v.inputs.push_back({x, y, x * n + y});
  v.score = [&g](std::span<const int> in, std::span<const int> out) {
    return g.score(in[0], in[1], out[0], out[1], out[2]).to_double();
  };
  return v;
}

void check_strategy(const GameView& view, const QuantumStrategy& strategy) {
  if (static_cast<int>(strategy.factor_dims.size()) != view.players ||
      static_cast<int>(strategy.measurements.size()) != view.players)
    throw std::invalid_argument("strategy: wrong number of players");
  Eigen::Index total = 1;
  for (int p = 0; p < view.players; ++p) {
    total *= strategy.factor_dims[p];
    const auto& family = strategy.measurements[p];
    if (static_cast<int>(family.size()) != view.input_sizes[p])
      throw std::invalid_argument("strategy: wrong measurement family size");
    for (const auto& povm : family) {
      if (povm.dim() != strategy.factor_dims[p])
        throw std::invalid_argument("strategy: POVM dimension mismatch");
      if (static_cast<int>(povm.size()) != view.output_sizes[p])
        throw std::invalid_argument("strategy: wrong outcome count");
    }
  }
  if (strategy.state.dim() != total)
    throw std::invalid_argument("strategy: state does not match factors");
}

double expected_score_view(const GameView& view,
                           const QuantumStrategy& strategy) {
  check_strategy(view, strategy);
  const double prob = 1.0 / static_cast<double>(view.inputs.size());
  double total = 0;
  std::vector<int> outs(static_cast<std::size_t>(view.players), 0);
  for (const auto& input : view.inputs) {
    // Enumerate joint outcomes.
    std::function<void(int, const Matrix&)> recurse =
        [&](int player, const Matrix& partial) {
          if (player == view.players) {
            total += prob * view.score(input, outs) *
                     (partial * strategy.state.matrix()).trace().real();
            return;
          }
          const Povm& povm =
              strategy.measurements[static_cast<std::size_t>(player)]
                                   [static_cast<std::size_t>(input[player])];
          for (int o = 0; o < view.output_sizes[player]; ++o) {
            outs[static_cast<std::size_t>(player)] = o;
            recurse(player + 1,
                    player == 0 ? povm.element(static_cast<std::size_t>(o))
                                : kron(partial, povm.element(
                                                    static_cast<std::size_t>(o))));
          }
        };
    recurse(0, Matrix());
  }
  return total;
}

// ---------------------------------------------------------------------------
// Exact classical values. Alice's output function is enumerated depth-first
// with pruning on an upper bound of the partial score; Bob's (and Eve's)
// best responses decompose per input and are folded in at the leaves.

struct ClassicalEnumeration {
  int n;
  const BellGame* game;
  const Rational* penalty;  // null for the plain 2-player game

  // Best response value for Bob input y against a complete Alice row,
  // summed over x (the 1/n^2 normalization is applied at the end).
  Rational bob_best(const std::vector<int>& alice, int y) const {
    Rational best;
    bool first = true;
    for (int t = 0; t < n; ++t) {
      Rational sum;
      for (int x = 0; x < n; ++x) {
        Rational term = game->score(x, y, alice[static_cast<std::size_t>(x)], t);
        if (penalty != nullptr && term < -*penalty) term = -*penalty;
        sum += term;
      }
      if (first || sum > best) {
        best = sum;
        first = false;
      }
    }
    return best;
  }

  Rational run() const {
    if (std::pow(static_cast<double>(n), n) > kEnumerationBudget)
      throw std::invalid_argument("classical_value: enumeration budget exceeded");
    std::vector<int> alice(static_cast<std::size_t>(n), 0);
    Rational best;
    bool have_best = false;
    dfs(alice, 0, best, have_best);
    // Normalize by the n^2 uniform inputs.
    return best * Rational(1, static_cast<std::int64_t>(n) * n);
  }

 private:
  void dfs(std::vector<int>& alice, int x, Rational& best,
           bool& have_best) const {
    if (x == n) {
      Rational total;
      for (int y = 0; y < n; ++y) total += bob_best(alice, y);
      if (!have_best || total > best) {
        best = total;
        have_best = true;
      }
      return;
    }
    // Prune: even scoring 1 on every remaining (x, y) pair cannot reach best.
    if (have_best) {
      Rational optimistic;
      for (int y = 0; y < n; ++y) {
        for (int xx = 0; xx < x; ++xx) {
          Rational row_max;
          bool row_first = true;
          for (int t = 0; t < n; ++t) {
            Rational v =
                game->score(xx, y, alice[static_cast<std::size_t>(xx)], t);
            if (row_first || v > row_max) {
              row_max = v;
              row_first = false;
            }
          }
          optimistic += row_max;
        }
      }
      optimistic += Rational((n - x) * n);  // remaining pairs at score 1
      if (optimistic < best) return;
    }
    for (int s = 0; s < n; ++s) {
      alice[static_cast<std::size_t>(x)] = s;
      dfs(alice, x + 1, best, have_best);
    }
  }
};

// ---------------------------------------------------------------------------
// Seesaw internals.

// Effective score operator on one player's factor for a fixed input tuple
// and fixed outcome of that player, with every other player's element fixed.
struct SeesawWorkspace {
  const GameView* view;
  const QuantumStrategy* strategy;
  std::vector<Eigen::Index> dims;

  // Tr_{-slot}[ rho * (⊗_{j != slot} ops_j ⊗ I_slot) ], an operator on the
  // slot factor satisfying Tr[O * result] = Tr[(⊗ ops with O at slot) rho].
  Matrix contracted(std::span<const Matrix* const> ops, std::size_t slot) const {
    Matrix embedded = Matrix::Identity(1, 1);
    for (std::size_t j = 0; j < dims.size(); ++j) {
      const Matrix factor = (j == slot)
                                ? Matrix::Identity(dims[j], dims[j])
                                : *ops[j];
      embedded = kron(embedded, factor);
    }
    return partial_trace_keeping(strategy->state.matrix() * embedded, dims,
                                 slot);
  }
};

Matrix positive_part_projector(const Matrix& herm) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  Matrix proj = Matrix::Zero(herm.rows(), herm.cols());
  for (Eigen::Index i = 0; i < herm.rows(); ++i) {
    if (solver.eigenvalues()(i) > 0)
      proj += solver.eigenvectors().col(i) *
              solver.eigenvectors().col(i).adjoint();
  }
  return proj;
}

QuantumStrategy random_strategy(SplitMix64& rng, const GameView& view,
                                std::span<const Eigen::Index> dims) {
  QuantumStrategy s;
  s.factor_dims.assign(dims.begin(), dims.end());
  Eigen::Index total = 1;
  for (auto d : dims) total *= d;
  s.state = DensityOperator::pure(random_unit_vector(rng, total));
  s.measurements.resize(static_cast<std::size_t>(view.players));
  for (int p = 0; p < view.players; ++p) {
    auto& family = s.measurements[static_cast<std::size_t>(p)];
    for (int i = 0; i < view.input_sizes[static_cast<std::size_t>(p)]; ++i) {
      family.push_back(random_projective_povm(
          rng, dims[static_cast<std::size_t>(p)],
          static_cast<std::size_t>(view.output_sizes[static_cast<std::size_t>(p)])));
    }
  }
  return s;
}

SeesawResult seesaw_view(const GameView& view,
                         std::span<const Eigen::Index> dims,
                         const SeesawOptions& opts) {
  if (static_cast<int>(dims.size()) != view.players)
    throw std::invalid_argument("seesaw: one dimension per player required");
  for (auto d : dims)
    if (d < 2) throw std::invalid_argument("seesaw: dimensions must be >= 2");
  if (opts.sweeps < 1 || opts.restarts < 1)
    throw std::invalid_argument("seesaw: sweeps and restarts must be >= 1");

  const double prob = 1.0 / static_cast<double>(view.inputs.size());
  Eigen::Index total_dim = 1;
  for (auto d : dims) total_dim *= d;

  SeesawResult result;
  result.best_score = -std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < opts.restarts; ++restart) {
    SplitMix64 rng(SplitMix64::derive_stream(opts.seed,
                                             static_cast<std::uint64_t>(restart)));
    QuantumStrategy strategy = random_strategy(rng, view, dims);
    std::vector<double> trajectory;

    for (int sweep = 0; sweep < opts.sweeps; ++sweep) {
      // State update: top eigenvector of the full score operator.
      Matrix score_op = Matrix::Zero(total_dim, total_dim);
      std::vector<int> outs(static_cast<std::size_t>(view.players), 0);
      for (const auto& input : view.inputs) {
        std::function<void(int, const Matrix&)> recurse =
            [&](int player, const Matrix& partial) {
              if (player == view.players) {
                score_op += prob * view.score(input, outs) * partial;
                return;
              }
              const Povm& povm =
                  strategy.measurements[static_cast<std::size_t>(player)]
                                       [static_cast<std::size_t>(input[player])];
              for (int o = 0; o < view.output_sizes[player]; ++o) {
                outs[static_cast<std::size_t>(player)] = o;
                const Matrix& e = povm.element(static_cast<std::size_t>(o));
                recurse(player + 1, player == 0 ? e : kron(partial, e));
              }
            };
        recurse(0, Matrix());
      }
      Eigen::SelfAdjointEigenSolver<Matrix> solver(
          0.5 * (score_op + score_op.adjoint()));
      Eigen::Index top = 0;
      solver.eigenvalues().maxCoeff(&top);
      strategy.state = DensityOperator::pure(solver.eigenvectors().col(top));

      // Player updates.
      SeesawWorkspace ws{&view, &strategy,
                         {strategy.factor_dims.begin(),
                          strategy.factor_dims.end()}};
      for (int player = 0; player < view.players; ++player) {
        const auto pidx = static_cast<std::size_t>(player);
        for (int input_value = 0;
             input_value < view.input_sizes[pidx]; ++input_value) {
          // Effective operators H_o for this player's input, accumulated
          // over all input tuples that assign input_value to this player.
          const int k = view.output_sizes[pidx];
          std::vector<Matrix> h(
              static_cast<std::size_t>(k),
              Matrix::Zero(dims[pidx], dims[pidx]));
          for (const auto& input : view.inputs) {
            if (input[pidx] != input_value) continue;
            // Enumerate other players' outcomes.
            std::vector<int> other(outs.size(), 0);
            std::function<void(int)> walk = [&](int p2) {
              if (p2 == view.players) {
                std::vector<const Matrix*> ops(
                    static_cast<std::size_t>(view.players));
                for (int j = 0; j < view.players; ++j) {
                  const auto jj = static_cast<std::size_t>(j);
                  ops[jj] = (j == player)
                                ? nullptr
                                : &strategy.measurements[jj]
                                      [static_cast<std::size_t>(input[j])]
                                          .element(static_cast<std::size_t>(
                                              other[jj]));
                }
                const Matrix t_mat = ws.contracted(ops, pidx);
                for (int o = 0; o < k; ++o) {
                  other[pidx] = o;
                  h[static_cast<std::size_t>(o)] +=
                      prob * view.score(input, other) *
                      0.5 * (t_mat + t_mat.adjoint());
                }
                return;
              }
              if (p2 == player) {
                walk(p2 + 1);
                return;
              }
              for (int o = 0; o < view.output_sizes[p2]; ++o) {
                other[static_cast<std::size_t>(p2)] = o;
                walk(p2 + 1);
              }
            };
            walk(0);
          }

          // Exact pairwise updates on the POVM elements.
          std::vector<Matrix> elements =
              strategy.measurements[pidx][static_cast<std::size_t>(input_value)]
                  .elements();
          for (int o1 = 0; o1 < k; ++o1) {
            for (int o2 = o1 + 1; o2 < k; ++o2) {
              const auto i1 = static_cast<std::size_t>(o1);
              const auto i2 = static_cast<std::size_t>(o2);
              const Matrix sum = elements[i1] + elements[i2];
              const Matrix root = matrix_sqrt(0.5 * (sum + sum.adjoint()));
              const Matrix window = 0.5 * ((root * (h[i1] - h[i2]) * root) +
                                           (root * (h[i1] - h[i2]) * root)
                                               .adjoint());
              const Matrix plus = positive_part_projector(window);
              elements[i1] = 0.5 * ((root * plus * root) +
                                    (root * plus * root).adjoint());
              elements[i2] =
                  0.5 * ((root * (Matrix::Identity(dims[pidx], dims[pidx]) -
                                  plus) *
                          root) +
                         (root * (Matrix::Identity(dims[pidx], dims[pidx]) -
                                  plus) *
                          root)
                             .adjoint());
            }
          }
          strategy.measurements[pidx][static_cast<std::size_t>(input_value)] =
              Povm::from_elements(std::move(elements));
        }
      }

      trajectory.push_back(expected_score_view(view, strategy));
    }

    if (trajectory.back() > result.best_score) {
      result.best_score = trajectory.back();
      result.best_strategy = strategy;
    }
    result.trajectories.push_back(std::move(trajectory));
  }
  return result;
}

}  // namespace

BellGame::BellGame(int n, std::vector<Rational> score_table)
    : n_(n), table_(std::move(score_table)) {
  if (n_ < 2) throw std::invalid_argument("BellGame: alphabet size >= 2");
  const auto expected =
      static_cast<std::size_t>(n_) * n_ * n_ * static_cast<std::size_t>(n_);
  if (table_.size() != expected)
    throw std::invalid_argument("BellGame: score table has wrong size");
  const Rational one(1), minus_one(-1);
  for (const auto& v : table_)
    if (v > one || v < minus_one)
      throw std::invalid_argument("BellGame: score outside [-1, 1]");
}

GuessingGame::GuessingGame(BellGame base, Rational penalty)
    : base_(std::move(base)), penalty_(std::move(penalty)) {
  if (penalty_ < Rational(1))
    throw std::invalid_argument("GuessingGame: penalty K must be >= 1");
}

BellGame make_chsh_bell_game() {
  const int n = 2;
  std::vector<Rational> table;
  table.reserve(16);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          table.push_back(((s ^ t) == (x & y)) ? Rational(1, 3) : Rational(-1));
  return BellGame(n, std::move(table));
}

GuessingGame make_guessing_game(const BellGame& g, const Rational& penalty) {
  return GuessingGame(g, penalty);
}

Rational classical_value(const BellGame& g) {
  return ClassicalEnumeration{g.n(), &g, nullptr}.run();
}

Rational classical_value(const GuessingGame& g) {
  const Rational k = g.penalty();
  return ClassicalEnumeration{g.n(), &g.base(), &k}.run();
}

double expected_score(const BellGame& g, const QuantumStrategy& strategy) {
  return expected_score_view(view_of(g), strategy);
}

double expected_score(const GuessingGame& g, const QuantumStrategy& strategy) {
  return expected_score_view(view_of(g), strategy);
}

QuantumStrategy embed_deterministic(int players,
                                    std::span<const int> input_sizes, int n,
                                    const DeterministicStrategy& det) {
  if (det.outputs.size() != static_cast<std::size_t>(players) ||
      input_sizes.size() != static_cast<std::size_t>(players))
    throw std::invalid_argument("embed_deterministic: shape mismatch");
  QuantumStrategy s;
  s.factor_dims.assign(static_cast<std::size_t>(players), 1);
  s.state = DensityOperator::from_matrix(Matrix::Identity(1, 1));
  s.measurements.resize(static_cast<std::size_t>(players));
  for (int p = 0; p < players; ++p) {
    const auto pp = static_cast<std::size_t>(p);
    if (det.outputs[pp].size() != static_cast<std::size_t>(input_sizes[pp]))
      throw std::invalid_argument("embed_deterministic: input count mismatch");
    for (int i = 0; i < input_sizes[pp]; ++i) {
      std::vector<Matrix> elements(static_cast<std::size_t>(n),
                                   Matrix::Zero(1, 1));
      const int out = det.outputs[pp][static_cast<std::size_t>(i)];
      if (out < 0 || out >= n)
        throw std::invalid_argument("embed_deterministic: output out of range");
      elements[static_cast<std::size_t>(out)] = Matrix::Identity(1, 1);
      s.measurements[pp].push_back(Povm::from_elements(std::move(elements)));
    }
  }
  return s;
}

namespace {

Povm basis_povm(const Vector& v0, const Vector& v1) {
  std::vector<Matrix> elements;
  elements.push_back(v0 * v0.adjoint());
  elements.push_back(v1 * v1.adjoint());
  return Povm::from_elements(std::move(elements));
}

}  // namespace

QuantumStrategy tsirelson_chsh_strategy() {
  QuantumStrategy s;
  s.factor_dims = {2, 2};
  Vector phi(4);
  phi << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
  s.state = DensityOperator::pure(phi);

  auto rotated = [](double theta) {
    Vector v0(2), v1(2);
    v0 << std::cos(theta), std::sin(theta);
    v1 << -std::sin(theta), std::cos(theta);
    return basis_povm(v0, v1);
  };
  const double pi = 3.14159265358979323846;
  s.measurements = {
      {rotated(0.0), rotated(pi / 4)},          // Alice: Z, X bases
      {rotated(pi / 8), rotated(-pi / 8)},      // Bob: ±pi/8 rotations
  };
  return s;
}

QuantumStrategy classical_best_chsh_strategy() {
  DeterministicStrategy det{{{0, 0}, {0, 0}}};
  const std::array<int, 2> inputs = {2, 2};
  return embed_deterministic(2, inputs, 2, det);
}

QuantumStrategy maximally_mixed_copyable_strategy() {
  QuantumStrategy s;
  s.factor_dims = {2, 2};
  s.state = DensityOperator::maximally_mixed(4);
  Vector e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  const Povm computational = basis_povm(e0, e1);
  s.measurements = {{computational, computational},
                    {computational, computational}};
  return s;
}

SeesawResult seesaw_lower_bound(const BellGame& g,
                                std::span<const Eigen::Index> dims,
                                const SeesawOptions& opts) {
  return seesaw_view(view_of(g), dims, opts);
}

SeesawResult seesaw_lower_bound(const GuessingGame& g,
                                std::span<const Eigen::Index> dims,
                                const SeesawOptions& opts) {
  return seesaw_view(view_of(g), dims, opts);
}

ForcedClassicalResult forced_classical_process(const BellGame& g,
                                               const QuantumStrategy& y) {
  const GameView gk_view = view_of(make_guessing_game(g, Rational(1)));
  check_strategy(gk_view, y);
  const int n = g.n();
  const auto dims = std::span<const Eigen::Index>(y.factor_dims);
  const auto& alice = y.measurements[0];
  const auto& bob = y.measurements[1];
  const auto& eve = y.measurements[2];
  for (const auto& povm : alice)
    if (!povm.is_projective())
      throw std::invalid_argument(
          "forced_classical_process: Alice's measurements must be projective");

  // Reduced two-player strategy.
  const std::array<bool, 3> keep_ab = {true, true, false};
  const Matrix rho_ab = hermitize_copy(
      partial_trace(y.state.matrix(), dims, keep_ab));
  QuantumStrategy two;
  two.factor_dims = {dims[0], dims[1]};
  two.state = DensityOperator::from_matrix(rho_ab);
  two.measurements = {alice, bob};
  ForcedClassicalResult result;
  result.original_score = expected_score(g, two);

  // Disagreement probabilities of Eve's guess against Alice, averaged over y.
  result.delta_x.assign(static_cast<std::size_t>(n), 0.0);
  for (int x = 0; x < n; ++x) {
    double agree = 0;
    for (int yy = 0; yy < n; ++yy) {
      for (int sout = 0; sout < n; ++sout) {
        const Matrix joint =
            kron(kron(alice[static_cast<std::size_t>(x)].element(
                          static_cast<std::size_t>(sout)),
                      Matrix::Identity(dims[1], dims[1])),
                 eve[static_cast<std::size_t>(x * n + yy)].element(
                     static_cast<std::size_t>(sout)));
        agree += (joint * y.state.matrix()).trace().real();
      }
    }
    result.delta_x[static_cast<std::size_t>(x)] =
        std::clamp(1.0 - agree / n, 0.0, 1.0);
    result.bound += 4.0 * std::sqrt(result.delta_x[static_cast<std::size_t>(x)]);
  }

  // Simulate the pre-measurement process: sigma_x is the state after Alice
  // has measured inputs 0..x-1; input x is scored against sigma_x.
  const std::array<Eigen::Index, 2> ab_dims = {dims[0], dims[1]};
  Matrix sigma = rho_ab;
  double process = 0;
  for (int x = 0; x < n; ++x) {
    for (int yy = 0; yy < n; ++yy) {
      for (int sout = 0; sout < n; ++sout) {
        for (int tout = 0; tout < n; ++tout) {
          const Matrix joint = kron(alice[static_cast<std::size_t>(x)].element(
                                        static_cast<std::size_t>(sout)),
                                    bob[static_cast<std::size_t>(yy)].element(
                                        static_cast<std::size_t>(tout)));
          process += g.score_d(x, yy, sout, tout) *
                     (joint * sigma).trace().real();
        }
      }
    }
    // Apply Alice's measurement channel for input x.
    Matrix next = Matrix::Zero(sigma.rows(), sigma.cols());
    for (int sout = 0; sout < n; ++sout) {
      const Matrix m = embed_at(alice[static_cast<std::size_t>(x)].element(
                                    static_cast<std::size_t>(sout)),
                                ab_dims, 0);
      next += m * sigma * m;
    }
    sigma = hermitize_copy(next);
  }
  result.process_score = process / static_cast<double>(n * n);

  if (std::abs(result.original_score - result.process_score) >
      result.bound + tol::inequality)
    throw std::logic_error(
        "forced_classical_process: disturbance chain violated");
  if (result.process_score > tol::inequality)
    throw std::logic_error(
        "forced_classical_process: classical process beats the classical value");
  return result;
}

}  // namespace bellrand
