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

#include <functional>
#include <optional>

#include "bellrand/extract.hpp"
#include "bellrand/games.hpp"

namespace bellrand {

struct ProtocolConfig {
  BellGame game;
  double delta = 0.1;       // required Bell violation, 0 < delta <= 1
  std::size_t rounds = 1;   // N
  std::size_t j_bits = 1;   // J, output size; 2^J <= n^N
  std::uint64_t seed = 0;

  void validate() const;
};

/// What the devices jointly remember between rounds: the inputs and outputs
/// of all completed rounds (they may communicate in between rounds, never
/// during one).
struct RoundHistory {
  std::span<const int> x, y, s, t;
};

/// Controller for scripted-memory devices: picks the strategy variant for
/// the next round from the round index and the history. Must be a pure
/// deterministic function of its arguments.
using ScriptController =
    std::function<std::size_t(std::size_t round, const RoundHistory&)>;

/// A pair of untrusted devices. Either iid (the same per-round strategy every
/// round) or scripted-memory: a classical controller switching between a
/// fixed set of per-round strategies based on the history. Each round uses a
/// fresh copy of the selected round state.
///
/// The per-(x,y) joint outcome distribution of every variant is computed once
/// at construction and shared read-only afterwards, so samplers cost O(1) per
/// round regardless of the quantum dimensions.
class DeviceModel {
 public:
  enum class Kind { kIid, kScriptedMemory };

  static DeviceModel iid(QuantumStrategy round_strategy);
  static DeviceModel scripted(std::vector<QuantumStrategy> variants,
                              ScriptController controller);

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  const std::vector<QuantumStrategy>& variants() const { return variants_; }
  std::size_t select_variant(std::size_t round, const RoundHistory& h) const;

  /// Cumulative distribution over outcome pairs s*n + t for the given
  /// variant and inputs.
  const std::vector<double>& outcome_cdf(std::size_t variant, int x,
                                         int y) const;

 private:
  DeviceModel(Kind kind, std::vector<QuantumStrategy> variants,
              ScriptController controller);

  Kind kind_;
  int n_ = 0;
  std::vector<QuantumStrategy> variants_;
  ScriptController controller_;
  std::vector<std::vector<std::vector<double>>> cdf_;  // [variant][x*n+y]
};

struct Transcript {
  std::vector<int> x, y, s, t;
  std::vector<double> w;  // per-round scores
  double avg_score = 0;
  bool succ = false;
  // Hash index and output, present only on success.
  std::optional<AffineHashFamily::Index> f_index;
  std::optional<gf2::Poly> v_bits;
};

struct MirrorTranscript {
  Transcript referee;
  std::vector<int> s_prime, t_prime;
  double avg_score_prime = 0;
  bool succ_prime = false;
  std::optional<gf2::Poly> v_prime;
};

/// One full protocol execution: uniform inputs, Born-rule outcomes from the
/// device model, the threshold check, and on success a uniformly drawn hash
/// applied to the output string. Bit-identical for identical (config, device)
/// including the seed.
Transcript run_protocol(const ProtocolConfig& cfg, const DeviceModel& dev);

/// The mirrored execution for iid devices: each round samples the joint
/// outcome of the devices' measurements and their conjugates on the canonical
/// purification of the round state. The adversary receives identical
/// classical copies of the inputs and of the hash index, evaluates the same
/// threshold on her own scores, and extracts with the shared index.
MirrorTranscript run_mirrored_protocol(const ProtocolConfig& cfg,
                                       const DeviceModel& dev);

struct WilsonEstimate {
  double p = 0, ci_lo = 0, ci_hi = 0;
  std::size_t count = 0, trials = 0;
};
WilsonEstimate wilson_estimate(std::size_t count, std::size_t trials);

struct GuessingStatistics {
  WilsonEstimate p_sss;  // P(S = S' and both sides pass)
  WilsonEstimate p_vvs;  // P(V = V' and both sides pass)
  WilsonEstimate p_ss;   // P(both sides pass)
  /// p_vvs <= p_sss + 2^-J p_ss, within three combined standard errors.
  bool decomposition_holds = false;
  double decomposition_margin = 0;
};

/// Monte-Carlo frequencies of the three guessing events over independent
/// derived-seed trials of the mirrored protocol.
GuessingStatistics guessing_statistics(const ProtocolConfig& cfg,
                                       const DeviceModel& dev,
                                       std::size_t trials, int threads = 1);

/// Exact guessing-event probabilities at N = 1, from the cached round joint
/// distribution and full hash-family enumeration. No sampling error; the
/// estimates carry degenerate intervals.
GuessingStatistics exact_guessing_statistics_n1(const ProtocolConfig& cfg,
                                                const DeviceModel& dev);

/// Named iid device presets: "tsirelson-chsh", "classical-best",
/// "maximally-mixed-copyable". All play the normalized CHSH game.
DeviceModel device_preset(const std::string& name);

/// Frequency of the average score exceeding the threshold over independent
/// derived-seed trials (raw rounds only, no hashing).
WilsonEstimate empirical_score_tail(const ProtocolConfig& cfg,
                                    const DeviceModel& dev, double threshold,
                                    std::size_t trials, int threads = 1);

/// Largest per-round expected score over the device's variants; the
/// conditional per-round mean of any scripted device is bounded by it.
double device_max_round_mean(const BellGame& game, const DeviceModel& dev);

/// Exact density-matrix computation of the protocol's final classical-quantum
/// state at small N for iid devices. The classical registers are the output
/// V, the input sequences, the hash index, and the succ flag; the quantum
/// register E holds the adversary's purifying systems, of dimension
/// (d_A d_B)^N. On abort the hash index register is still uniform (the index
/// is public randomness independent of everything else) and V is fixed to 0.
class ExactFinalState {
 public:
  /// Packed classical labels: c = (v * n_xy + xy_seq) * n_f + f_index.
  const CqState& state() const { return state_; }
  std::int64_t v_alphabet() const { return v_alphabet_; }
  std::int64_t xy_count() const { return xy_count_; }
  std::int64_t f_count() const { return f_count_; }
  double success_probability() const;

  /// Regroups the blocks into one sector per classical (xy_seq, f_index)
  /// value, each a cq-state over (V, succ) on E. The direct sum of the
  /// sectors is the state with the inputs and hash index lifted into the
  /// quantum register, which is the shape the guessing bound is applied to.
  std::vector<CqState> theorem_sectors() const;

  /// Guessing bound evaluated on the sectors (|C| = 2^J).
  PgpBoundResult guessing_bound() const;

  friend ExactFinalState exact_final_state(const ProtocolConfig&,
                                           const DeviceModel&);

 private:
  explicit ExactFinalState(Eigen::Index e_dim) : state_(e_dim) {}
  CqState state_;
  std::int64_t v_alphabet_ = 0;
  std::int64_t xy_count_ = 0;
  std::int64_t f_count_ = 0;
};

ExactFinalState exact_final_state(const ProtocolConfig& cfg,
                                  const DeviceModel& dev);

}  // namespace bellrand
