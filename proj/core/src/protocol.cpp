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

#include "bellrand/protocol.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace bellrand {

namespace {

constexpr double kBranchBudget = 1e7;
constexpr double kBlockEntryBudget = 1.25e7;  // ~200 MB of complex doubles

std::size_t sample_cdf(const std::vector<double>& cdf, double u) {
  for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
    if (u < cdf[i]) return i;
  return cdf.size() - 1;
}

void check_two_player_strategy(const QuantumStrategy& s) {
  if (s.factor_dims.size() != 2 || s.measurements.size() != 2)
    throw std::invalid_argument("DeviceModel: strategies must be 2-player");
  const std::size_t n = s.measurements[0].size();
  if (n < 2 || s.measurements[1].size() != n)
    throw std::invalid_argument("DeviceModel: measurement family sizes");
  for (int p = 0; p < 2; ++p) {
    for (const auto& povm : s.measurements[static_cast<std::size_t>(p)]) {
      if (povm.dim() != s.factor_dims[static_cast<std::size_t>(p)] ||
          povm.size() != n)
        throw std::invalid_argument("DeviceModel: POVM shape mismatch");
    }
  }
  if (s.state.dim() != s.factor_dims[0] * s.factor_dims[1])
    throw std::invalid_argument("DeviceModel: state dimension mismatch");
}

std::vector<double> joint_outcome_cdf(const QuantumStrategy& s, int x, int y) {
  const int n = static_cast<int>(s.measurements[0].size());
  std::vector<double> probs(static_cast<std::size_t>(n) * n, 0.0);
  for (int so = 0; so < n; ++so) {
    for (int to = 0; to < n; ++to) {
      const Matrix joint =
          kron(s.measurements[0][static_cast<std::size_t>(x)].element(
                   static_cast<std::size_t>(so)),
               s.measurements[1][static_cast<std::size_t>(y)].element(
                   static_cast<std::size_t>(to)));
      probs[static_cast<std::size_t>(so * n + to)] =
          std::max(0.0, (joint * s.state.matrix()).trace().real());
    }
  }
  double total = 0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > 1e-9)
    throw std::logic_error("DeviceModel: outcome distribution not normalized");
  std::vector<double> cdf(probs.size());
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i] / total;
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

// Runs the raw rounds of one trial, filling the transcript's sequences.
void run_rounds(const ProtocolConfig& cfg, const DeviceModel& dev,
                SplitMix64& rng, Transcript& tr) {
  const int n = cfg.game.n();
  const std::size_t rounds = cfg.rounds;
  tr.x.reserve(rounds);
  tr.y.reserve(rounds);
  tr.s.reserve(rounds);
  tr.t.reserve(rounds);
  tr.w.reserve(rounds);
  double total = 0;
  for (std::size_t i = 0; i < rounds; ++i) {
    const RoundHistory history{tr.x, tr.y, tr.s, tr.t};
    const std::size_t variant = dev.select_variant(i, history);
    const int x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const int y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const std::size_t outcome =
        sample_cdf(dev.outcome_cdf(variant, x, y), rng.next_double());
    const int s = static_cast<int>(outcome) / n;
    const int t = static_cast<int>(outcome) % n;
    const double w = cfg.game.score_d(x, y, s, t);
    tr.x.push_back(x);
    tr.y.push_back(y);
    tr.s.push_back(s);
    tr.t.push_back(t);
    tr.w.push_back(w);
    total += w;
  }
  tr.avg_score = total / static_cast<double>(rounds);
  tr.succ = tr.avg_score > cfg.delta;
}

AffineHashFamily family_for(const ProtocolConfig& cfg) {
  const std::size_t v =
      field_degree_for_outputs(cfg.game.n(), cfg.rounds);
  return AffineHashFamily(shared_field(v), cfg.j_bits);
}

// Mirrored joint-outcome sampler for one iid round strategy: distributions
// of (s, t, s', t') from measuring the purification of the round state with
// the devices' measurements on Q and their conjugates on Q'.
struct MirrorSampler {
  int n = 0;
  std::vector<std::vector<double>> probs;  // [x*n+y] -> packed outcome probs
  std::vector<std::vector<double>> cdf;    // cumulative version

  static MirrorSampler build(const QuantumStrategy& s) {
    MirrorSampler ms;
    const int n = static_cast<int>(s.measurements[0].size());
    ms.n = n;
    const PureState purified = canonical_purification(s.state);
    const Vector& psi = purified.amplitudes;
    ms.probs.resize(static_cast<std::size_t>(n) * n);
    ms.cdf.resize(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        std::vector<double> probs;
        probs.reserve(static_cast<std::size_t>(n) * n * n * n);
        for (int so = 0; so < n; ++so) {
          for (int to = 0; to < n; ++to) {
            const Matrix q_op =
                kron(s.measurements[0][static_cast<std::size_t>(x)].element(
                         static_cast<std::size_t>(so)),
                     s.measurements[1][static_cast<std::size_t>(y)].element(
                         static_cast<std::size_t>(to)));
            for (int sp = 0; sp < n; ++sp) {
              for (int tp = 0; tp < n; ++tp) {
                const Matrix qp_op =
                    kron(s.measurements[0][static_cast<std::size_t>(x)]
                             .element(static_cast<std::size_t>(sp))
                             .conjugate(),
                         s.measurements[1][static_cast<std::size_t>(y)]
                             .element(static_cast<std::size_t>(tp))
                             .conjugate());
                const Matrix joint = kron(q_op, qp_op);
                probs.push_back(
                    std::max(0.0, (psi.adjoint() * joint * psi)(0).real()));
              }
            }
          }
        }
        double total = 0;
        for (double p : probs) total += p;
        if (std::abs(total - 1.0) > 1e-9)
          throw std::logic_error("mirror sampler: distribution not normalized");
        for (auto& p : probs) p /= total;
        auto& c = ms.cdf[static_cast<std::size_t>(x * n + y)];
        c.resize(probs.size());
        double acc = 0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
          acc += probs[i];
          c[i] = acc;
        }
        c.back() = 1.0;
        ms.probs[static_cast<std::size_t>(x * n + y)] = std::move(probs);
      }
    }
    return ms;
  }
};

MirrorTranscript run_mirrored_with(const MirrorSampler& sampler,
                                   const ProtocolConfig& cfg) {
  const int n = cfg.game.n();
  SplitMix64 rng(cfg.seed);
  MirrorTranscript mt;
  Transcript& tr = mt.referee;
  const std::size_t rounds = cfg.rounds;
  double total = 0, total_prime = 0;
  for (std::size_t i = 0; i < rounds; ++i) {
    const int x = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const int y = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    const std::size_t outcome = sample_cdf(
        sampler.cdf[static_cast<std::size_t>(x * n + y)], rng.next_double());
    const int tp = static_cast<int>(outcome) % n;
    const int sp = static_cast<int>(outcome / static_cast<std::size_t>(n)) % n;
    const int t = static_cast<int>(outcome / (static_cast<std::size_t>(n) * n)) % n;
    const int s =
        static_cast<int>(outcome / (static_cast<std::size_t>(n) * n * n));
    tr.x.push_back(x);
    tr.y.push_back(y);
    tr.s.push_back(s);
    tr.t.push_back(t);
    mt.s_prime.push_back(sp);
    mt.t_prime.push_back(tp);
    const double w = cfg.game.score_d(x, y, s, t);
    tr.w.push_back(w);
    total += w;
    total_prime += cfg.game.score_d(x, y, sp, tp);
  }
  tr.avg_score = total / static_cast<double>(rounds);
  tr.succ = tr.avg_score > cfg.delta;
  mt.avg_score_prime = total_prime / static_cast<double>(rounds);
  mt.succ_prime = mt.avg_score_prime > cfg.delta;
  if (tr.succ || mt.succ_prime) {
    const AffineHashFamily fam = family_for(cfg);
    const auto index = fam.sample_index(rng);
    if (tr.succ) {
      tr.f_index = index;
      tr.v_bits = fam.apply(index, encode_outputs(tr.s, n));
    }
    if (mt.succ_prime)
      mt.v_prime = fam.apply(index, encode_outputs(mt.s_prime, n));
  }
  return mt;
}

// Deterministic trial sharding; worker(trial_index, stream) must only touch
// its own state, results are merged by the caller.
void for_each_trial(std::size_t trials, int threads,
                    const std::function<void(std::size_t, int)>& worker) {
  const int nthreads =
      std::max(1, std::min<int>(threads, static_cast<int>(trials)));
  if (nthreads == 1) {
    for (std::size_t i = 0; i < trials; ++i) worker(i, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int shard = 0; shard < nthreads; ++shard) {
    pool.emplace_back([&, shard] {
      for (std::size_t i = static_cast<std::size_t>(shard); i < trials;
           i += static_cast<std::size_t>(nthreads))
        worker(i, shard);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void ProtocolConfig::validate() const {
  if (!(delta > 0) || delta > 1)
    throw std::invalid_argument("ProtocolConfig: need 0 < delta <= 1");
  if (rounds < 1) throw std::invalid_argument("ProtocolConfig: need N >= 1");
  if (j_bits < 1) throw std::invalid_argument("ProtocolConfig: need J >= 1");
  // 2^J <= n^N (cannot extract more bits than the raw output length).
  gf2::BigUint p(1);
  for (std::size_t i = 0; i < rounds; ++i)
    p.mul_add_small(static_cast<std::uint64_t>(game.n()), 0);
  if (j_bits + 1 > p.bit_length())
    throw std::invalid_argument("ProtocolConfig: J exceeds N log2(n)");
}

DeviceModel::DeviceModel(Kind kind, std::vector<QuantumStrategy> variants,
                         ScriptController controller)
    : kind_(kind),
      variants_(std::move(variants)),
      controller_(std::move(controller)) {
  if (variants_.empty())
    throw std::invalid_argument("DeviceModel: at least one strategy required");
  for (const auto& v : variants_) check_two_player_strategy(v);
  n_ = static_cast<int>(variants_[0].measurements[0].size());
  for (const auto& v : variants_)
    if (static_cast<int>(v.measurements[0].size()) != n_)
      throw std::invalid_argument("DeviceModel: variants disagree on alphabet");
  cdf_.resize(variants_.size());
  for (std::size_t vi = 0; vi < variants_.size(); ++vi) {
    cdf_[vi].resize(static_cast<std::size_t>(n_) * n_);
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        cdf_[vi][static_cast<std::size_t>(x * n_ + y)] =
            joint_outcome_cdf(variants_[vi], x, y);
  }
}

DeviceModel DeviceModel::iid(QuantumStrategy round_strategy) {
  std::vector<QuantumStrategy> variants;
  variants.push_back(std::move(round_strategy));
  return DeviceModel(Kind::kIid, std::move(variants), {});
}

DeviceModel DeviceModel::scripted(std::vector<QuantumStrategy> variants,
                                  ScriptController controller) {
  if (!controller)
    throw std::invalid_argument("DeviceModel: scripted controller required");
  return DeviceModel(Kind::kScriptedMemory, std::move(variants),
                     std::move(controller));
}

std::size_t DeviceModel::select_variant(std::size_t round,
                                        const RoundHistory& h) const {
  if (kind_ == Kind::kIid) return 0;
  const std::size_t v = controller_(round, h);
  if (v >= variants_.size())
    throw std::out_of_range("DeviceModel: controller picked a bad variant");
  return v;
}

const std::vector<double>& DeviceModel::outcome_cdf(std::size_t variant,
                                                    int x, int y) const {
  return cdf_[variant][static_cast<std::size_t>(x * n_ + y)];
}

Transcript run_protocol(const ProtocolConfig& cfg, const DeviceModel& dev) {
  cfg.validate();
  if (dev.n() != cfg.game.n())
    throw std::invalid_argument("run_protocol: device/game alphabet mismatch");
  SplitMix64 rng(cfg.seed);
  Transcript tr;
  run_rounds(cfg, dev, rng, tr);
  if (tr.succ) {
    const AffineHashFamily fam = family_for(cfg);
    const auto index = fam.sample_index(rng);
    tr.f_index = index;
    tr.v_bits = fam.apply(index, encode_outputs(tr.s, cfg.game.n()));
  }
  return tr;
}

MirrorTranscript run_mirrored_protocol(const ProtocolConfig& cfg,
                                       const DeviceModel& dev) {
  cfg.validate();
  if (dev.kind() != DeviceModel::Kind::kIid)
    throw std::invalid_argument(
        "run_mirrored_protocol: only iid devices are supported");
  if (dev.n() != cfg.game.n())
    throw std::invalid_argument("run_mirrored_protocol: alphabet mismatch");
  const MirrorSampler sampler = MirrorSampler::build(dev.variants()[0]);
  return run_mirrored_with(sampler, cfg);
}

WilsonEstimate wilson_estimate(std::size_t count, std::size_t trials) {
  WilsonEstimate e;
  e.count = count;
  e.trials = trials;
  if (trials == 0) return e;
  const double z = 1.959963984540054;  // 95%
  const double nt = static_cast<double>(trials);
  const double phat = static_cast<double>(count) / nt;
  e.p = phat;
  const double denom = 1.0 + z * z / nt;
  const double center = (phat + z * z / (2.0 * nt)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / nt + z * z / (4.0 * nt * nt)) / denom;
  e.ci_lo = std::max(0.0, center - half);
  e.ci_hi = std::min(1.0, center + half);
  return e;
}

GuessingStatistics guessing_statistics(const ProtocolConfig& cfg,
                                       const DeviceModel& dev,
                                       std::size_t trials, int threads) {
  cfg.validate();
  if (dev.kind() != DeviceModel::Kind::kIid)
    throw std::invalid_argument("guessing_statistics: iid devices required");
  if (trials < 1)
    throw std::invalid_argument("guessing_statistics: trials >= 1");
  // Force the field into the shared cache before the parallel section.
  (void)family_for(cfg);
  const MirrorSampler sampler = MirrorSampler::build(dev.variants()[0]);

  const int nthreads = std::max(1, threads);
  std::vector<std::size_t> sss(static_cast<std::size_t>(nthreads), 0);
  std::vector<std::size_t> vvs(static_cast<std::size_t>(nthreads), 0);
  std::vector<std::size_t> ss(static_cast<std::size_t>(nthreads), 0);
  for_each_trial(trials, nthreads, [&](std::size_t trial, int shard) {
    ProtocolConfig c = cfg;
    c.seed = SplitMix64::derive_stream(cfg.seed, trial);
    const MirrorTranscript mt = run_mirrored_with(sampler, c);
    if (!(mt.referee.succ && mt.succ_prime)) return;
    const auto sh = static_cast<std::size_t>(shard);
    ++ss[sh];
    if (mt.referee.s == mt.s_prime) ++sss[sh];
    if (mt.referee.v_bits.has_value() && mt.v_prime.has_value() &&
        *mt.referee.v_bits == *mt.v_prime)
      ++vvs[sh];
  });
  std::size_t n_sss = 0, n_vvs = 0, n_ss = 0;
  for (int i = 0; i < nthreads; ++i) {
    n_sss += sss[static_cast<std::size_t>(i)];
    n_vvs += vvs[static_cast<std::size_t>(i)];
    n_ss += ss[static_cast<std::size_t>(i)];
  }

  GuessingStatistics g;
  g.p_sss = wilson_estimate(n_sss, trials);
  g.p_vvs = wilson_estimate(n_vvs, trials);
  g.p_ss = wilson_estimate(n_ss, trials);
  const double nt = static_cast<double>(trials);
  auto stderr_of = [nt](const WilsonEstimate& e) {
    return std::sqrt(e.p * (1.0 - e.p) / nt);
  };
  const double hash_share = std::exp2(-static_cast<double>(cfg.j_bits));
  const double sigma = std::sqrt(
      stderr_of(g.p_vvs) * stderr_of(g.p_vvs) +
      stderr_of(g.p_sss) * stderr_of(g.p_sss) +
      hash_share * hash_share * stderr_of(g.p_ss) * stderr_of(g.p_ss));
  g.decomposition_margin =
      g.p_sss.p + hash_share * g.p_ss.p + 3.0 * sigma - g.p_vvs.p;
  g.decomposition_holds = g.decomposition_margin >= -tol::inequality;
  return g;
}

WilsonEstimate empirical_score_tail(const ProtocolConfig& cfg,
                                    const DeviceModel& dev, double threshold,
                                    std::size_t trials, int threads) {
  if (dev.n() != cfg.game.n())
    throw std::invalid_argument("empirical_score_tail: alphabet mismatch");
  if (trials < 1)
    throw std::invalid_argument("empirical_score_tail: trials >= 1");
  const int nthreads = std::max(1, threads);
  std::vector<std::size_t> exceed(static_cast<std::size_t>(nthreads), 0);
  for_each_trial(trials, nthreads, [&](std::size_t trial, int shard) {
    ProtocolConfig c = cfg;
    c.seed = SplitMix64::derive_stream(cfg.seed, trial);
    SplitMix64 rng(c.seed);
    Transcript tr;
    run_rounds(c, dev, rng, tr);
    if (tr.avg_score > threshold)
      ++exceed[static_cast<std::size_t>(shard)];
  });
  std::size_t total = 0;
  for (int i = 0; i < nthreads; ++i)
    total += exceed[static_cast<std::size_t>(i)];
  return wilson_estimate(total, trials);
}

GuessingStatistics exact_guessing_statistics_n1(const ProtocolConfig& cfg,
                                                const DeviceModel& dev) {
  cfg.validate();
  if (cfg.rounds != 1)
    throw std::invalid_argument("exact_guessing_statistics_n1: N must be 1");
  if (dev.kind() != DeviceModel::Kind::kIid)
    throw std::invalid_argument("exact_guessing_statistics_n1: iid required");
  const int n = cfg.game.n();
  const MirrorSampler sampler = MirrorSampler::build(dev.variants()[0]);
  const AffineHashFamily fam = family_for(cfg);
  const std::size_t v = fam.v();
  const std::uint64_t family_size = std::uint64_t(1) << (2 * v);
  if (v >= 20)
    throw std::invalid_argument("exact_guessing_statistics_n1: family too big");
  const std::uint64_t v_mask = (std::uint64_t(1) << v) - 1;

  double p_ss = 0, p_sss = 0, p_vvs = 0;
  const double input_weight = 1.0 / static_cast<double>(n * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const auto& probs = sampler.probs[static_cast<std::size_t>(x * n + y)];
      for (int so = 0; so < n; ++so) {
        for (int to = 0; to < n; ++to) {
          for (int sp = 0; sp < n; ++sp) {
            for (int tp = 0; tp < n; ++tp) {
              const double p =
                  input_weight *
                  probs[static_cast<std::size_t>(((so * n + to) * n + sp) * n +
                                                 tp)];
              if (p == 0) continue;
              const bool succ = cfg.game.score_d(x, y, so, to) > cfg.delta;
              const bool succ_p = cfg.game.score_d(x, y, sp, tp) > cfg.delta;
              if (!(succ && succ_p)) continue;
              p_ss += p;
              if (so == sp) p_sss += p;
              // Fraction of the hash family mapping the two outputs equal.
              const std::array<int, 1> ds = {so};
              const std::array<int, 1> dp = {sp};
              const gf2::Poly es = encode_outputs(ds, n);
              const gf2::Poly ep = encode_outputs(dp, n);
              std::uint64_t collisions = 0;
              for (std::uint64_t f = 0; f < family_size; ++f) {
                const AffineHashFamily::Index index{gf2::Poly{f & v_mask},
                                                    gf2::Poly{f >> v}};
                if (fam.apply(index, es) == fam.apply(index, ep)) ++collisions;
              }
              p_vvs += p * static_cast<double>(collisions) /
                       static_cast<double>(family_size);
            }
          }
        }
      }
    }
  }
  GuessingStatistics g;
  auto exact = [](double p) {
    WilsonEstimate e;
    e.p = e.ci_lo = e.ci_hi = p;
    return e;
  };
  g.p_ss = exact(p_ss);
  g.p_sss = exact(p_sss);
  g.p_vvs = exact(p_vvs);
  const double hash_share = std::exp2(-static_cast<double>(cfg.j_bits));
  g.decomposition_margin = g.p_sss.p + hash_share * g.p_ss.p - g.p_vvs.p;
  g.decomposition_holds = g.decomposition_margin >= -tol::inequality;
  return g;
}

DeviceModel device_preset(const std::string& name) {
  if (name == "tsirelson-chsh")
    return DeviceModel::iid(tsirelson_chsh_strategy());
  if (name == "classical-best")
    return DeviceModel::iid(classical_best_chsh_strategy());
  if (name == "maximally-mixed-copyable")
    return DeviceModel::iid(maximally_mixed_copyable_strategy());
  throw std::invalid_argument("unknown device preset: " + name);
}

double device_max_round_mean(const BellGame& game, const DeviceModel& dev) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& variant : dev.variants())
    best = std::max(best, expected_score(game, variant));
  return best;
}

double ExactFinalState::success_probability() const {
  double p = 0;
  for (const auto& [label, block] : state_.blocks())
    if (label.z == kSucc) p += block.trace().real();
  return p;
}

std::vector<CqState> ExactFinalState::theorem_sectors() const {
  std::vector<CqState> sectors(
      static_cast<std::size_t>(xy_count_ * f_count_),
      CqState(state_.quantum_dim()));
  for (const auto& [label, block] : state_.blocks()) {
    const std::int64_t f = label.c % f_count_;
    const std::int64_t rest = label.c / f_count_;
    const std::int64_t xy = rest % xy_count_;
    const std::int64_t v = rest / xy_count_;
    sectors[static_cast<std::size_t>(xy * f_count_ + f)].add_block(
        CqLabel{v, label.z}, block);
  }
  return sectors;
}

PgpBoundResult ExactFinalState::guessing_bound() const {
  const auto sectors = theorem_sectors();
  return pgp_bound_check_sectored(sectors, v_alphabet_);
}

ExactFinalState exact_final_state(const ProtocolConfig& cfg,
                                  const DeviceModel& dev) {
  cfg.validate();
  if (dev.kind() != DeviceModel::Kind::kIid)
    throw std::invalid_argument("exact_final_state: iid devices required");
  if (dev.n() != cfg.game.n())
    throw std::invalid_argument("exact_final_state: alphabet mismatch");
  const int n = cfg.game.n();
  const std::size_t rounds = cfg.rounds;
  const QuantumStrategy& strategy = dev.variants()[0];
  const Eigen::Index d = strategy.state.dim();

  const std::size_t v = field_degree_for_outputs(n, rounds);
  if (v >= 20)
    throw std::invalid_argument("exact_final_state: hash index space too large");
  const std::uint64_t f_count = std::uint64_t(1) << (2 * v);
  const double branch =
      std::pow(static_cast<double>(n) * n * n * n,
               static_cast<double>(rounds)) *
      static_cast<double>(f_count);
  if (branch > kBranchBudget)
    throw std::invalid_argument("exact_final_state: branch budget exceeded");

  double e_dim_d = std::pow(static_cast<double>(d), static_cast<double>(rounds));
  double xy_count_d = std::pow(static_cast<double>(n) * n,
                               static_cast<double>(rounds));
  const double v_alphabet_d = std::exp2(static_cast<double>(cfg.j_bits));
  const double label_upper =
      (v_alphabet_d + 1.0) * xy_count_d * static_cast<double>(f_count);
  if (label_upper * e_dim_d * e_dim_d > kBlockEntryBudget)
    throw std::invalid_argument("exact_final_state: block memory budget exceeded");

  const auto e_dim = static_cast<Eigen::Index>(e_dim_d);
  const auto xy_count = static_cast<std::int64_t>(xy_count_d);
  const auto v_alphabet = static_cast<std::int64_t>(v_alphabet_d);

  // Per-round subnormalized adversary blocks: the state left on the
  // purifying register when the devices output (s, t) on inputs (x, y).
  const PureState purified = canonical_purification(strategy.state);
  const Matrix rho_hat = purified.projector();
  const std::array<Eigen::Index, 2> qq_dims = {d, d};
  const std::array<bool, 2> keep_eve = {false, true};
  std::vector<Matrix> beta(static_cast<std::size_t>(n) * n * n * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      for (int so = 0; so < n; ++so) {
        for (int to = 0; to < n; ++to) {
          const Matrix joint =
              kron(strategy.measurements[0][static_cast<std::size_t>(x)]
                       .element(static_cast<std::size_t>(so)),
                   strategy.measurements[1][static_cast<std::size_t>(y)]
                       .element(static_cast<std::size_t>(to)));
          const Matrix block = partial_trace(
              rho_hat * embed_at(joint, qq_dims, 0), qq_dims, keep_eve);
          beta[static_cast<std::size_t>(((x * n + y) * n + so) * n + to)] =
              0.5 * (block + block.adjoint());
        }
      }
    }
  }

  const AffineHashFamily fam(shared_field(v), cfg.j_bits);
  const std::uint64_t v_mask = (std::uint64_t(1) << v) - 1;
  ExactFinalState out(e_dim);
  out.v_alphabet_ = v_alphabet;
  out.xy_count_ = xy_count;
  out.f_count_ = static_cast<std::int64_t>(f_count);

  const double input_weight = 1.0 / xy_count_d;
  const double f_weight = 1.0 / static_cast<double>(f_count);

  std::vector<int> ss(rounds);
  // Depth-first over rounds: prefix holds the tensor product of the
  // adversary blocks of completed rounds (subnormalized with the outcome
  // probabilities), score_sum the accumulated referee score.
  std::function<void(std::size_t, const Matrix&, double, std::int64_t)> walk =
      [&](std::size_t round, const Matrix& prefix, double score_sum,
          std::int64_t xy_index) {
        if (round == rounds) {
          const double avg = score_sum / static_cast<double>(rounds);
          const bool succ = avg > cfg.delta;
          const Matrix weighted = prefix * input_weight * f_weight;
          if (succ) {
            const gf2::Poly encoded = encode_outputs(ss, n);
            for (std::uint64_t f = 0; f < f_count; ++f) {
              const AffineHashFamily::Index index{gf2::Poly{f & v_mask},
                                                  gf2::Poly{f >> v}};
              const auto value = static_cast<std::int64_t>(
                  fam.apply(index, encoded).low_u64());
              const std::int64_t c =
                  (value * xy_count + xy_index) * out.f_count_ +
                  static_cast<std::int64_t>(f);
              out.state_.add_block(CqLabel{c, kSucc}, weighted);
            }
          } else {
            for (std::uint64_t f = 0; f < f_count; ++f) {
              const std::int64_t c =
                  xy_index * out.f_count_ + static_cast<std::int64_t>(f);
              out.state_.add_block(CqLabel{c, kAbort}, weighted);
            }
          }
          return;
        }
        for (int x = 0; x < n; ++x) {
          for (int y = 0; y < n; ++y) {
            for (int so = 0; so < n; ++so) {
              for (int to = 0; to < n; ++to) {
                ss[round] = so;
                const Matrix& b = beta[static_cast<std::size_t>(
                    ((x * n + y) * n + so) * n + to)];
                const Matrix next =
                    (round == 0) ? b : kron(prefix, b);
                walk(round + 1, next, score_sum + cfg.game.score_d(x, y, so, to),
                     xy_index * (n * n) + (x * n + y));
              }
            }
          }
        }
      };
  walk(0, Matrix(), 0.0, 0);
  return out;
}

}  // namespace bellrand
