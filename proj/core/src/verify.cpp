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

#include "bellrand/verify.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "bellrand/bounds.hpp"
#include "bellrand/extract.hpp"
#include "bellrand/games.hpp"
#include "bellrand/linalg.hpp"

namespace bellrand {

namespace {

CheckResult check(const std::string& name, bool passed,
                  const std::string& detail = "") {
  return CheckResult{name, passed, detail};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Exhaustive trial-division irreducibility for small degrees, kept separate
// from the library's fast test so the pinned moduli get an independent check.
bool irreducible_by_trial_division(std::uint64_t f_bits, std::size_t degree) {
  if (degree == 1) return true;
  for (std::size_t dg = 1; dg <= degree / 2; ++dg) {
    for (std::uint64_t g = (std::uint64_t(1) << dg);
         g < (std::uint64_t(1) << (dg + 1)); ++g) {
      // Long division of f by g over GF(2).
      std::uint64_t rem = f_bits;
      while (true) {
        int top = 63;
        while (top >= 0 && ((rem >> top) & 1) == 0) --top;
        if (top < static_cast<int>(dg)) break;
        rem ^= g << (static_cast<std::size_t>(top) - dg);
      }
      if (rem == 0) return false;
    }
  }
  return true;
}

}  // namespace

SuiteReport verify_linalg(std::uint64_t seed, int property_trials,
                          int mirror_trials) {
  SuiteReport report{"linalg", {}};
  SplitMix64 rng(SplitMix64::derive_stream(seed, 0x11));

  // Purification marginals, full-rank and rank-deficient states alike.
  {
    bool ok = true;
    double worst = 0;
    for (int trial = 0; trial < 50 && ok; ++trial) {
      const Eigen::Index dim = 2 + static_cast<Eigen::Index>(trial % 4);
      DensityOperator rho =
          (trial % 3 == 0) ? DensityOperator::pure(random_unit_vector(rng, dim))
                           : random_density(rng, dim);
      const PureState purified = canonical_purification(rho);
      const Matrix hat = purified.projector();
      const std::array<Eigen::Index, 2> dims = {dim, dim};
      const std::array<bool, 2> keep_q = {true, false};
      const std::array<bool, 2> keep_qp = {false, true};
      const double dev_q =
          (partial_trace(hat, dims, keep_q) - rho.matrix()).cwiseAbs().maxCoeff();
      const double dev_qp =
          (partial_trace(hat, dims, keep_qp) - rho.matrix().transpose())
              .cwiseAbs()
              .maxCoeff();
      worst = std::max({worst, dev_q, dev_qp});
      ok = worst <= tol::trace_one;
    }
    report.checks.push_back(
        check("purification-marginals", ok, "max deviation " + fmt(worst)));
  }

  // PGM completeness, including singular quantum marginals.
  {
    bool ok = true;
    double worst = 0;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      const Eigen::Index dim = 2 + static_cast<Eigen::Index>(trial % 3);
      const std::size_t labels = 2 + static_cast<std::size_t>(trial % 3);
      CqState alpha(dim);
      for (std::size_t c = 0; c < labels; ++c) {
        Matrix block;
        if (trial % 4 == 0) {
          // Rank-one blocks confined to a shared subspace keep α^Q singular.
          Vector v = Vector::Zero(dim);
          v(0) = Complex(rng.next_normal(), rng.next_normal());
          if (dim > 1) v(1) = Complex(rng.next_normal(), rng.next_normal());
          v.normalize();
          block = v * v.adjoint() / static_cast<double>(labels);
        } else {
          block = random_density(rng, dim).matrix() /
                  static_cast<double>(labels);
        }
        alpha.add_block(CqLabel{static_cast<std::int64_t>(c), 0}, block);
      }
      const Povm pgm = pretty_good_measurement(alpha);
      Matrix sum = Matrix::Zero(dim, dim);
      for (const auto& e : pgm.elements()) sum += e;
      worst = std::max(
          worst,
          (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff());
      ok = worst <= tol::povm_sum;
    }
    report.checks.push_back(
        check("pgm-completeness", ok, "max |sum - id| " + fmt(worst)));
  }

  // Mirror identity on full-rank states.
  {
    bool ok = true;
    double worst = 0;
    for (int trial = 0; trial < mirror_trials && ok; ++trial) {
      const Eigen::Index dim = 2 + static_cast<Eigen::Index>(trial % 4);
      const DensityOperator rho = random_full_rank_density(rng, dim);
      const Povm m = random_projective_povm(
          rng, dim, 2 + static_cast<std::size_t>(trial % 2));
      worst = std::max(worst, verify_mirror_identity(rho, m));
      ok = worst <= tol::mirror;
    }
    report.checks.push_back(
        check("mirror-identity", ok,
              "max deviation " + fmt(worst) + " over " +
                  std::to_string(mirror_trials) + " full-rank states"));
  }

  // Guessing bound lhs <= rhs on random cq-states with a succ/abort flag.
  {
    bool ok = true;
    double worst_margin = 0;
    for (int trial = 0; trial < property_trials && ok; ++trial) {
      const Eigen::Index dim = 2 + static_cast<Eigen::Index>(trial % 3);
      const std::int64_t c_size = 2 + trial % 3;
      std::vector<CqLabel> labels;
      for (std::int64_t c = 0; c < c_size; ++c) {
        labels.push_back(CqLabel{c, kSucc});
        if (trial % 5 != 0) labels.push_back(CqLabel{c, kAbort});
      }
      const CqState alpha = random_cq_state(rng, dim, labels);
      const PgpBoundResult r = pgp_bound_check(alpha, c_size);
      worst_margin = std::max(worst_margin, r.lhs - r.rhs);
      ok = worst_margin <= tol::inequality;
    }
    report.checks.push_back(check(
        "guessing-bound", ok,
        "max lhs - rhs " + fmt(worst_margin) + " over " +
            std::to_string(property_trials) + " states"));
  }

  // Gentle measurement: disturbance <= 4 sqrt(delta), and 0 at delta = 0.
  {
    bool ok = true;
    double worst_margin = -1;
    for (int trial = 0; trial < property_trials && ok; ++trial) {
      const Eigen::Index dim = 2 + static_cast<Eigen::Index>(trial % 3);
      const std::size_t c_size = 2 + static_cast<std::size_t>(trial % 2);
      const Povm m = random_projective_povm(rng, dim, c_size);
      std::vector<CqLabel> labels;
      for (std::size_t c = 0; c < c_size; ++c)
        labels.push_back(CqLabel{static_cast<std::int64_t>(c), 0});
      const CqState alpha = random_cq_state(rng, dim, labels);
      const auto r = gentle_measurement_disturbance(alpha, m);
      worst_margin =
          std::max(worst_margin, r.disturbance - 4.0 * std::sqrt(r.delta));
      ok = worst_margin <= tol::inequality;
    }
    // Zero-disagreement direction: blocks confined to the projector ranges.
    double zero_case = -1;
    {
      const Eigen::Index dim = 4;
      const Povm m = random_projective_povm(rng, dim, 2);
      CqState alpha(dim);
      for (std::size_t c = 0; c < 2; ++c) {
        const Matrix& p = m.element(c);
        Matrix block = p * random_density(rng, dim).matrix() * p;
        alpha.add_block(CqLabel{static_cast<std::int64_t>(c), 0},
                        0.5 * block / std::max(block.trace().real(), 1e-300));
      }
      const auto r = gentle_measurement_disturbance(alpha, m);
      zero_case = r.disturbance;
      ok = ok && r.delta <= tol::inequality && r.disturbance <= tol::inequality;
    }
    report.checks.push_back(
        check("gentle-measurement", ok,
              "max disturbance - 4 sqrt(delta) " + fmt(worst_margin) +
                  ", zero-delta disturbance " + fmt(zero_case)));
  }

  // Trace-norm metric axioms.
  {
    bool ok = true;
    double worst = 0;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      const Eigen::Index dim = 2 + static_cast<Eigen::Index>(trial % 3);
      const Matrix a = random_hermitian(rng, dim);
      const Matrix b = random_hermitian(rng, dim);
      const Matrix c = random_hermitian(rng, dim);
      const double dab = trace_norm_distance(a, b);
      const double dba = trace_norm_distance(b, a);
      const double dac = trace_norm_distance(a, c);
      const double dcb = trace_norm_distance(c, b);
      worst = std::max(worst, std::abs(dab - dba));
      worst = std::max(worst, dab - (dac + dcb));
      worst = std::max(worst, trace_norm_distance(a, a));
      ok = worst <= tol::inequality;
    }
    report.checks.push_back(
        check("trace-norm-metric", ok, "max violation " + fmt(worst)));
  }

  return report;
}

SuiteReport verify_games(std::uint64_t seed, int chain_trials, int sweeps) {
  SuiteReport report{"games", {}};
  SplitMix64 rng(SplitMix64::derive_stream(seed, 0x22));
  const BellGame chsh = make_chsh_bell_game();

  report.checks.push_back(check(
      "chsh-normalization",
      classical_value(chsh) == Rational(0) &&
          chsh.score(0, 0, 0, 0) == Rational(1, 3) &&
          chsh.score(1, 1, 0, 0) == Rational(-1),
      "classical value " + classical_value(chsh).to_string()));

  const double tsirelson = (2.0 * std::sqrt(2.0) - 2.0) / 6.0;
  {
    const double score = expected_score(chsh, tsirelson_chsh_strategy());
    report.checks.push_back(check("tsirelson-score",
                                  std::abs(score - tsirelson) <= 1e-9,
                                  "score " + fmt(score)));
  }

  {
    const std::array<Eigen::Index, 2> dims = {2, 2};
    const SeesawResult r =
        seesaw_lower_bound(chsh, dims, SeesawOptions{sweeps, 8, seed});
    bool monotone = true;
    for (const auto& traj : r.trajectories)
      for (std::size_t i = 1; i < traj.size(); ++i)
        if (traj[i] < traj[i - 1] - tol::inequality) monotone = false;
    report.checks.push_back(check(
        "seesaw-chsh",
        r.best_score >= 0.1380 && r.best_score <= 0.138072 + 1e-6 && monotone,
        "best " + fmt(r.best_score)));
  }

  {
    const GuessingGame gk = make_guessing_game(chsh, Rational(4));
    report.checks.push_back(check("gk-classical-value",
                                  classical_value(gk) == Rational(0),
                                  classical_value(gk).to_string()));
  }

  // Guessing-game value bound on seesaw witnesses and random strategies.
  {
    bool ok = true;
    std::string detail;
    for (const std::int64_t k : {16, 64, 256}) {
      const GuessingGame gk = make_guessing_game(chsh, Rational(k));
      const double bound =
          gk_value_bound(chsh.n(), static_cast<double>(k));
      const std::array<Eigen::Index, 3> dims = {2, 2, 4};
      const SeesawResult r =
          seesaw_lower_bound(gk, dims, SeesawOptions{sweeps, 8, seed ^ 0x5});
      detail += "K=" + std::to_string(k) + ": " + fmt(r.best_score) + " <= " +
                fmt(bound) + "; ";
      if (r.best_score > bound + tol::score) ok = false;
    }
    report.checks.push_back(check("gk-value-bound", ok, detail));
  }

  // Forced-classical chain on random strategies (throws on violation).
  {
    bool ok = true;
    int done = 0;
    std::string detail;
    try {
      for (; done < chain_trials; ++done) {
        QuantumStrategy s;
        s.factor_dims = {2, 2, 2};
        s.state = (done % 2 == 0)
                      ? random_density(rng, 8)
                      : DensityOperator::pure(random_unit_vector(rng, 8));
        std::vector<Povm> alice, bob, eve;
        for (int i = 0; i < 2; ++i) alice.push_back(random_projective_povm(rng, 2, 2));
        for (int i = 0; i < 2; ++i) bob.push_back(random_projective_povm(rng, 2, 2));
        for (int i = 0; i < 4; ++i) eve.push_back(random_projective_povm(rng, 2, 2));
        s.measurements = {alice, bob, eve};
        const auto r = forced_classical_process(chsh, s);
        if (r.process_score > tol::inequality) {
          ok = false;
          break;
        }
      }
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    report.checks.push_back(check(
        "forced-classical-chain", ok,
        detail.empty() ? std::to_string(done) + " strategies" : detail));
  }

  // Score ranges: [-1, 1] on the base game, [-K, 1] on the guessing game.
  {
    bool ok = true;
    const GuessingGame gk = make_guessing_game(chsh, Rational(16));
    for (int trial = 0; trial < 50 && ok; ++trial) {
      QuantumStrategy s;
      s.factor_dims = {2, 2, 2};
      s.state = random_density(rng, 8);
      std::vector<Povm> alice, bob, eve;
      for (int i = 0; i < 2; ++i) alice.push_back(random_projective_povm(rng, 2, 2));
      for (int i = 0; i < 2; ++i) bob.push_back(random_projective_povm(rng, 2, 2));
      for (int i = 0; i < 4; ++i) eve.push_back(random_projective_povm(rng, 2, 2));
      s.measurements = {alice, bob, eve};
      const double gk_score = expected_score(gk, s);
      QuantumStrategy two;
      two.factor_dims = {2, 2};
      const std::array<Eigen::Index, 3> dims3 = {2, 2, 2};
      const std::array<bool, 3> keep_ab = {true, true, false};
      Matrix rho_ab = partial_trace(s.state.matrix(), dims3, keep_ab);
      two.state = DensityOperator::from_matrix(0.5 * (rho_ab + rho_ab.adjoint()));
      two.measurements = {alice, bob};
      const double base_score = expected_score(chsh, two);
      ok = base_score <= 1 + tol::inequality &&
           base_score >= -1 - tol::inequality &&
           gk_score <= 1 + tol::inequality &&
           gk_score >= -16 - tol::inequality;
    }
    report.checks.push_back(check("score-ranges", ok));
  }

  return report;
}

SuiteReport verify_hash(std::size_t max_v) {
  SuiteReport report{"hash", {}};

  {
    bool ok = true;
    double worst = 0;
    for (std::size_t v = 1; v <= max_v && ok; ++v) {
      for (std::size_t u = 1; u <= v && ok; ++u) {
        const AffineHashFamily fam(BinaryField(v), u);
        const double max_prob =
            verify_two_universality(fam, std::uint64_t(1) << v);
        worst = std::max(worst, max_prob - std::exp2(-static_cast<double>(u)));
        ok = max_prob <= std::exp2(-static_cast<double>(u));
      }
    }
    report.checks.push_back(check(
        "two-universality", ok,
        "v <= " + std::to_string(max_v) + ", max excess " + fmt(worst)));
  }

  {
    bool ok = true;
    for (std::size_t v = 1; v <= 4 && ok; ++v)
      for (std::size_t u = 1; u <= v && ok; ++u)
        ok = verify_pair_uniformity(AffineHashFamily(BinaryField(v), u),
                                    std::uint64_t(1) << v);
    report.checks.push_back(check("pair-uniformity", ok, "exact for v <= 4"));
  }

  {
    // Pinned worked examples of the field arithmetic.
    bool ok = true;
    const BinaryField f3(3);
    ok = ok && f3.modulus() == gf2::Poly{0b1011};  // X^3 + X + 1
    // X * X^2 = X^3 = X + 1 mod the pinned modulus.
    ok = ok && f3.mul(gf2::Poly{0b010}, gf2::Poly{0b100}) == gf2::Poly{0b011};
    const AffineHashFamily fam(f3, 3);
    ok = ok && fam.log2_size() == 6;
    ok = ok &&
         fam.apply({gf2::Poly{1}, gf2::Poly{0}}, gf2::Poly{0b101}) ==
             gf2::Poly{0b101};  // identity map at full width
    ok = ok && fam.apply({gf2::Poly{0}, gf2::Poly{0b110}}, gf2::Poly{0b101}) ==
                   gf2::Poly{0b110};  // constant map
    report.checks.push_back(check("worked-examples", ok));
  }

  {
    bool ok = true;
    const std::array<int, 3> s1 = {0, 0, 0};
    const std::array<int, 3> s2 = {1, 0, 1};
    const std::array<int, 2> s3 = {2, 1};
    ok = ok && encode_outputs(s1, 2).is_zero();
    ok = ok && encode_outputs(s2, 2) == gf2::Poly{5};
    ok = ok && encode_outputs(s3, 3) == gf2::Poly{7};
    report.checks.push_back(check("output-encoding", ok));
  }

  {
    // Pinned moduli: independent trial-division check and lexicographic
    // minimality at small degrees, fast verification up to 64.
    bool ok = true;
    for (std::size_t v = 1; v <= 64 && ok; ++v)
      ok = gf2::is_irreducible(gf2::smallest_irreducible(v));
    for (std::size_t v = 2; v <= 16 && ok; ++v) {
      const std::uint64_t pinned =
          gf2::smallest_irreducible(v).low_u64();
      ok = irreducible_by_trial_division(pinned, v);
      for (std::uint64_t candidate = std::uint64_t(1) << v;
           candidate < pinned && ok; ++candidate)
        ok = !irreducible_by_trial_division(candidate, v);
    }
    report.checks.push_back(check("modulus-table", ok));
  }

  return report;
}

SuiteReport verify_bounds() {
  SuiteReport report{"bounds", {}};

  {
    bool ok = true;
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const double rounds = 10.0 + 137.0 * i;
        const double delta = 0.05 + 0.09 * j;
        const int n = 2 + (i + j) % 3;
        const double g = guessing_event_bound(rounds, delta, n);
        const double composed =
            azuma_tail_bound(rounds, delta / 2.0, optimal_k(n, delta));
        worst = std::max(worst, std::abs(g - composed) / composed);
        const double j_bits = static_cast<double>(1 + (i + 2 * j) % 7);
        const double main_bound = main_theorem_bound(rounds, delta, n, j_bits);
        const double squared = main_bound * main_bound;
        const double rhs = std::exp2(j_bits) * g;
        worst = std::max(worst, std::abs(squared - rhs) / rhs);
        ok = worst <= tol::bound_identity;
      }
    }
    report.checks.push_back(check("compositional-identities", ok,
                                  "max relative deviation " + fmt(worst)));
  }

  {
    bool ok = true;
    ok = ok && std::abs(azuma_tail_bound(128, 0.5, 1) - std::exp(-4.0)) < 1e-15;
    ok = ok && azuma_tail_bound(1000, 0, 1) == 1.0;
    ok = ok && std::abs(gk_value_bound(2, 256) - 0.5) < 1e-15;
    ok = ok && std::abs(gk_value_bound(2, 64) - 1.0) < 1e-15;
    ok = ok && std::abs(optimal_k(2, 0.1) - 25600.0) < 1e-9;
    ok = ok && std::abs(optimal_k(2, 1.0) - 256.0) < 1e-12;
    // Residual margin at the balancing penalty is exactly delta / 2.
    for (const double delta : {0.05, 0.1, 0.5, 1.0}) {
      const double k = optimal_k(2, delta);
      ok = ok && std::abs((delta - gk_value_bound(2, k)) - delta / 2.0) < 1e-12;
    }
    // Doubling the rounds squares the tail bound.
    const double b1 = azuma_tail_bound(77, 0.3, 2);
    const double b2 = azuma_tail_bound(154, 0.3, 2);
    ok = ok && std::abs(b2 - b1 * b1) < 1e-15;
    ok = ok && guessing_event_bound(0, 0.3, 2) == 1.0;
    ok = ok && std::abs(main_theorem_bound(100, 0.3, 2, 0) -
                        std::exp(-100 * std::pow(0.3, 6) /
                                 (262144.0 * 16.0))) < 1e-15;
    report.checks.push_back(check("pinned-values", ok));
  }

  {
    bool ok = true;
    // Decreasing in N, increasing in n; the main bound increases with J.
    for (int i = 1; i < 20 && ok; ++i) {
      ok = ok && guessing_event_bound(i * 50, 0.2, 2) <=
                     guessing_event_bound((i - 1) * 50, 0.2, 2);
      ok = ok && guessing_event_bound(1000, 0.2, 2 + i) >=
                     guessing_event_bound(1000, 0.2, 1 + i);
      ok = ok && main_theorem_bound(1000, 0.2, 2, i) >=
                     main_theorem_bound(1000, 0.2, 2, i - 1);
    }
    report.checks.push_back(check("monotonicity", ok));
  }

  {
    BoundReport r;
    r.name = "probe";
    r.trivial_max = 2.0;
    r.bound = 2.5;
    r.measured = 0.3;
    const bool vacuous = compare(r).verdict == Verdict::kVacuous;
    r.bound = 0.5;
    const bool holds = compare(r).verdict == Verdict::kHolds;
    r.measured = 0.9;
    const bool violated = compare(r).verdict == Verdict::kViolated;
    report.checks.push_back(
        check("verdict-rules", vacuous && holds && violated));
  }

  return report;
}

std::vector<SuiteReport> verify_all(std::uint64_t seed) {
  return {verify_linalg(seed), verify_games(seed), verify_hash(),
          verify_bounds()};
}

}  // namespace bellrand
