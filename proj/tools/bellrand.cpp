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

#include <CLI11.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "bellrand/bounds.hpp"
#include "bellrand/protocol.hpp"
#include "bellrand/serialize.hpp"
#include "bellrand/verify.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitVerificationFailure = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct ExperimentSpec {
  bellrand::ProtocolConfig config{bellrand::make_chsh_bell_game()};
  std::string device_name = "tsirelson-chsh";
  std::optional<fs::path> game_file, strategy_file;
  std::size_t trials = 1;

  bellrand::DeviceModel make_device() const {
    if (strategy_file.has_value()) {
      return bellrand::DeviceModel::iid(
          bellrand::strategy_from_json(read_file(*strategy_file)));
    }
    return bellrand::device_preset(device_name);
  }
};

ExperimentSpec load_spec(const std::string& config_path,
                         std::optional<std::uint64_t> seed_flag,
                         std::optional<std::size_t> trials_flag) {
  ExperimentSpec spec;
  if (!config_path.empty()) {
    const json j = json::parse(read_file(config_path));
    if (j.contains("device")) {
      const auto& dev = j.at("device");
      if (dev.is_string()) {
        spec.device_name = dev.get<std::string>();
      } else {
        if (dev.contains("game_file"))
          spec.game_file = fs::path(dev.at("game_file").get<std::string>());
        if (dev.contains("strategy_file"))
          spec.strategy_file =
              fs::path(dev.at("strategy_file").get<std::string>());
        else
          throw std::invalid_argument("device object needs strategy_file");
      }
    }
    if (spec.game_file.has_value())
      spec.config.game = bellrand::game_from_json(read_file(*spec.game_file));
    if (j.contains("delta")) spec.config.delta = j.at("delta").get<double>();
    if (j.contains("N")) spec.config.rounds = j.at("N").get<std::size_t>();
    if (j.contains("J")) spec.config.j_bits = j.at("J").get<std::size_t>();
    if (j.contains("seed")) spec.config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trials")) spec.trials = j.at("trials").get<std::size_t>();
  }
  if (seed_flag.has_value()) spec.config.seed = *seed_flag;
  if (trials_flag.has_value()) spec.trials = *trials_flag;
  spec.config.validate();
  return spec;
}

int cmd_simulate(const ExperimentSpec& spec, const fs::path& out_dir,
                 int threads) {
  const bellrand::DeviceModel dev = spec.make_device();
  // Warm the shared field cache before running trials in parallel.
  bellrand::shared_field(bellrand::field_degree_for_outputs(
      spec.config.game.n(), spec.config.rounds));

  std::vector<std::string> lines(spec.trials);
  std::vector<std::uint8_t> succ(spec.trials, 0);
  std::vector<double> avg(spec.trials, 0.0);
  const int nthreads = std::max(1, threads);
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= spec.trials) return;
      bellrand::ProtocolConfig cfg = spec.config;
      cfg.seed = bellrand::SplitMix64::derive_stream(spec.config.seed, i);
      const bellrand::Transcript tr = bellrand::run_protocol(cfg, dev);
      lines[i] = bellrand::transcript_to_json_line(tr, i);
      succ[i] = tr.succ ? 1 : 0;
      avg[i] = tr.avg_score;
    }
  };
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::string transcript_text;
  for (const auto& line : lines) transcript_text += line + "\n";
  write_file(out_dir / "transcripts.jsonl", transcript_text);

  std::size_t successes = 0;
  double mean_avg = 0;
  for (std::size_t i = 0; i < spec.trials; ++i) {
    successes += succ[i];
    mean_avg += avg[i];
  }
  std::string csv = bellrand::stats_csv_header();
  if (spec.trials > 0) {
    csv += bellrand::stats_csv_row(
        "success_rate", bellrand::wilson_estimate(successes, spec.trials));
    csv += bellrand::stats_csv_row_exact(
        "mean_avg_score", mean_avg / static_cast<double>(spec.trials),
        spec.trials);
  }
  write_file(out_dir / "stats.csv", csv);
  std::cout << "simulate: " << successes << "/" << spec.trials
            << " successes -> " << (out_dir / "stats.csv").string() << "\n";
  return kExitOk;
}

int cmd_mirror(const ExperimentSpec& spec, const fs::path& out_dir,
               int threads) {
  const bellrand::DeviceModel dev = spec.make_device();
  bellrand::GuessingStatistics stats;
  bool exact = false;
  if (spec.config.rounds == 1) {
    stats = bellrand::exact_guessing_statistics_n1(spec.config, dev);
    exact = true;
  } else {
    stats = bellrand::guessing_statistics(spec.config, dev, spec.trials,
                                          threads);
  }

  std::string csv = bellrand::stats_csv_header();
  const std::size_t trials = exact ? 0 : spec.trials;
  csv += bellrand::stats_csv_row("p_sss", stats.p_sss);
  csv += bellrand::stats_csv_row("p_vvs", stats.p_vvs);
  csv += bellrand::stats_csv_row("p_ss", stats.p_ss);
  csv += bellrand::stats_csv_row_exact("decomposition_margin",
                                       stats.decomposition_margin, trials);
  write_file(out_dir / "guessing_stats.csv", csv);

  bellrand::BoundReport report;
  report.name = "guessing-event";
  report.rounds = static_cast<double>(spec.config.rounds);
  report.delta = spec.config.delta;
  report.n = spec.config.game.n();
  report.j_bits = static_cast<double>(spec.config.j_bits);
  report.bound = bellrand::guessing_event_bound(
      static_cast<double>(spec.config.rounds), spec.config.delta,
      spec.config.game.n());
  report.measured = stats.p_sss.p;
  report.ci_lo = stats.p_sss.ci_lo;
  report.ci_hi = stats.p_sss.ci_hi;
  report.trials = trials;
  report.trivial_max = 1.0;
  report = bellrand::compare(report);

  write_file(out_dir / "bounds.csv",
             bellrand::bound_report_csv_header() +
                 bellrand::bound_report_csv_row(report));
  write_file(out_dir / "bound_report.json",
             bellrand::bound_report_to_json(report) + "\n");
  std::cout << "mirror: p_sss=" << stats.p_sss.p << " p_vvs=" << stats.p_vvs.p
            << " p_ss=" << stats.p_ss.p << " verdict "
            << bellrand::to_string(report.verdict) << "\n";
  if (!stats.decomposition_holds) {
    std::cerr << "mirror: hash decomposition inequality failed\n";
    return kExitVerificationFailure;
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<bellrand::SuiteReport> reports;
  if (suite == "all") {
    reports = bellrand::verify_all(seed);
  } else if (suite == "linalg") {
    reports.push_back(bellrand::verify_linalg(seed));
  } else if (suite == "games") {
    reports.push_back(bellrand::verify_games(seed));
  } else if (suite == "hash") {
    reports.push_back(bellrand::verify_hash());
  } else if (suite == "bounds") {
    reports.push_back(bellrand::verify_bounds());
  } else {
    std::cerr << "unknown suite: " << suite
              << " (expected all|linalg|games|hash|bounds)\n";
    return kExitConfigError;
  }
  bool all_ok = true;
  for (const auto& report : reports) {
    for (const auto& c : report.checks) {
      std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << report.suite << "/"
                << c.name;
      if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
      std::cout << "\n";
      all_ok = all_ok && c.passed;
    }
  }
  return all_ok ? kExitOk : kExitVerificationFailure;
}

int cmd_extract(const fs::path& input, const fs::path& output,
                std::uint64_t p_size, std::size_t u, int alphabet,
                std::uint64_t seed, const std::string& forced_index) {
  const bellrand::AffineHashFamily fam =
      bellrand::AffineHashFamily::for_set_size(p_size, u);
  bellrand::AffineHashFamily::Index index;
  if (!forced_index.empty()) {
    const auto comma = forced_index.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("--force-index expects a_hex,b_hex");
    index.a = bellrand::gf2::Poly::from_hex(forced_index.substr(0, comma));
    index.b = bellrand::gf2::Poly::from_hex(forced_index.substr(comma + 1));
  } else {
    bellrand::SplitMix64 rng(seed);
    index = fam.sample_index(rng);
  }

  json header{{"v", fam.v()},
              {"u", fam.u()},
              {"p_size", p_size},
              {"modulus", fam.field().modulus().to_hex()},
              {"index_a", index.a.to_hex()},
              {"index_b", index.b.to_hex()}};
  std::string out_text = header.dump() + "\n";

  std::istringstream in(read_file(input));
  std::string line;
  const int hex_width = static_cast<int>((u + 3) / 4);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<int> digits;
    digits.reserve(line.size());
    for (char ch : line) {
      if (ch < '0' || ch >= '0' + alphabet)
        throw std::invalid_argument("bad digit for base-" +
                                    std::to_string(alphabet) + ": " + line);
      digits.push_back(ch - '0');
    }
    const bellrand::gf2::Poly encoded =
        bellrand::encode_outputs(digits, alphabet);
    if (encoded.degree() >= static_cast<long>(fam.v()))
      throw std::invalid_argument("input overflows the field: " + line);
    const std::uint64_t value = fam.apply(index, encoded).low_u64();
    std::ostringstream os;
    os << "0x" << std::hex << std::nouppercase << std::setw(hex_width)
       << std::setfill('0') << value;
    out_text += os.str() + "\n";
  }
  write_file(output, out_text);
  std::cout << "extract: wrote " << output.string() << "\n";
  return kExitOk;
}

int cmd_game_value(const std::string& game_path, const std::string& preset,
                   double gk_penalty, std::vector<Eigen::Index> dims,
                   int sweeps, int restarts, std::uint64_t seed) {
  bellrand::BellGame game = bellrand::make_chsh_bell_game();
  if (!game_path.empty())
    game = bellrand::game_from_json(read_file(game_path));
  else if (!preset.empty() && preset != "chsh")
    throw std::invalid_argument("unknown game preset: " + preset);

  std::cout << "classical_value = " << bellrand::classical_value(game).to_string()
            << "\n";
  if (gk_penalty > 0) {
    const bellrand::GuessingGame gk = bellrand::make_guessing_game(
        game, bellrand::Rational::from_double(gk_penalty));
    std::cout << "gk_classical_value = "
              << bellrand::classical_value(gk).to_string() << "\n";
    std::cout << "gk_value_bound = "
              << bellrand::gk_value_bound(game.n(), gk_penalty) << "\n";
    if (dims.empty()) dims = {2, 2, 4};
    const auto res = bellrand::seesaw_lower_bound(
        gk, dims, bellrand::SeesawOptions{sweeps, restarts, seed});
    std::cout << "seesaw_lower_bound = " << res.best_score << "\n";
  } else {
    if (dims.empty()) dims = {2, 2};
    const auto res = bellrand::seesaw_lower_bound(
        game, dims, bellrand::SeesawOptions{sweeps, restarts, seed});
    std::cout << "seesaw_lower_bound = " << res.best_score << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-violation randomness: simulate, mirror, verify, extract"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_flag;
  std::optional<std::size_t> trials_flag;
  std::string out_dir = "out";
  int threads = 1;
  app.add_option("--config", config_path, "experiment spec JSON")
      ->configurable(false);
  app.add_option("--seed", seed_flag, "master seed (overrides config)");
  app.add_option("--trials", trials_flag, "trial count (overrides config)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for trials");

  auto* simulate = app.add_subcommand("simulate", "run the protocol");
  auto* mirror = app.add_subcommand("mirror", "run the mirrored protocol");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  verify->add_option("suite", suite, "all|linalg|games|hash|bounds");

  auto* extract = app.add_subcommand("extract", "hash raw outputs to bits");
  std::string in_file, out_file = "extracted.txt", force_index;
  std::uint64_t p_size = 0;
  std::size_t u_bits = 1;
  int alphabet = 2;
  extract->add_option("--in", in_file, "raw outputs, one base-n string per line")
      ->required();
  extract->add_option("--out-file", out_file, "output path");
  extract->add_option("--p-size", p_size, "input set size |P|")->required();
  extract->add_option("--u", u_bits, "output bits")->required();
  extract->add_option("--alphabet", alphabet, "digit alphabet size (default 2)");
  extract->add_option("--force-index", force_index,
                      "fixed hash index a_hex,b_hex (testing)");

  auto* game_value = app.add_subcommand("game-value", "classical value + seesaw");
  std::string game_path, game_preset = "chsh";
  double gk_penalty = 0;
  std::vector<Eigen::Index> dims;
  int sweeps = 50, restarts = 8;
  game_value->add_option("--game", game_path, "game definition JSON");
  game_value->add_option("--preset", game_preset, "named game (chsh)");
  game_value->add_option("--gk", gk_penalty, "evaluate the guessing game G_K");
  game_value->add_option("--dims", dims, "per-player dimensions for seesaw");
  game_value->add_option("--sweeps", sweeps, "seesaw sweeps");
  game_value->add_option("--restarts", restarts, "seesaw restarts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed() || mirror->parsed()) {
      const ExperimentSpec spec = load_spec(config_path, seed_flag, trials_flag);
      return simulate->parsed()
                 ? cmd_simulate(spec, out_dir, threads)
                 : cmd_mirror(spec, out_dir, threads);
    }
    if (verify->parsed()) return cmd_verify(suite, seed_flag.value_or(1));
    if (extract->parsed())
      return cmd_extract(in_file, out_file, p_size, u_bits, alphabet,
                         seed_flag.value_or(1), force_index);
    if (game_value->parsed())
      return cmd_game_value(game_path, game_preset, gk_penalty, dims, sweeps,
                            restarts, seed_flag.value_or(1));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
