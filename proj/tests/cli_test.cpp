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

// End-to-end checks of the command-line tool: spawns the real binary.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

const char* cli_path() { return BELLRAND_CLI_PATH; }

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "bellrand_cli_test";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& stdout_file = {}) {
  std::string command = std::string(cli_path()) + " " + args;
  if (!stdout_file.empty()) command += " > " + stdout_file.string();
  command += " 2>/dev/null";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("extract: identity index maps the worked example to 0x0") {
  const fs::path dir = work_dir();
  spit(dir / "raw.txt", "000\n");
  const fs::path out = dir / "ext.txt";
  const int code = run("extract --in " + (dir / "raw.txt").string() +
                       " --out-file " + out.string() +
                       " --p-size 8 --u 3 --force-index 1,0");
  CHECK(code == 0);
  const std::string text = slurp(out);
  CHECK(text.find("\"modulus\":\"b\"") != std::string::npos);
  CHECK(text.find("\n0x0\n") != std::string::npos);
}

TEST_CASE("extract: output width precondition fails cleanly") {
  const fs::path dir = work_dir();
  spit(dir / "raw2.txt", "000\n");
  const int code = run("extract --in " + (dir / "raw2.txt").string() +
                       " --out-file " + (dir / "e2.txt").string() +
                       " --p-size 8 --u 4");
  CHECK(code == 1);
}

TEST_CASE("extract: deterministic given the seed") {
  const fs::path dir = work_dir();
  spit(dir / "raw3.txt", "0110\n1001\n1111\n");
  const fs::path out1 = dir / "e3a.txt";
  const fs::path out2 = dir / "e3b.txt";
  CHECK(run("--seed 9 extract --in " + (dir / "raw3.txt").string() +
            " --out-file " + out1.string() + " --p-size 16 --u 2") == 0);
  CHECK(run("--seed 9 extract --in " + (dir / "raw3.txt").string() +
            " --out-file " + out2.string() + " --p-size 16 --u 2") == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK_FALSE(slurp(out1).empty());
}

TEST_CASE("simulate: zero trials produce empty transcripts and a bare csv") {
  const fs::path dir = work_dir() / "sim0";
  const int code = run("--trials 0 --out " + dir.string() + " simulate");
  CHECK(code == 0);
  CHECK(slurp(dir / "transcripts.jsonl").empty());
  const std::string csv = slurp(dir / "stats.csv");
  CHECK(csv.rfind("# bellrand.stats.v1", 0) == 0);
  CHECK(csv.find("success_rate") == std::string::npos);
}

TEST_CASE("simulate: byte-identical reruns and sensible success rates") {
  const fs::path dir = work_dir();
  spit(dir / "spec.json",
       R"({"device":"tsirelson-chsh","delta":0.02,"N":400,"J":8,"seed":5,)"
       R"("trials":40})");
  const fs::path out1 = dir / "sim1";
  const fs::path out2 = dir / "sim2";
  CHECK(run("--config " + (dir / "spec.json").string() + " --out " +
            out1.string() + " simulate") == 0);
  CHECK(run("--config " + (dir / "spec.json").string() + " --out " +
            out2.string() + " --threads 3 simulate") == 0);
  CHECK(slurp(out1 / "transcripts.jsonl") == slurp(out2 / "transcripts.jsonl"));
  CHECK(slurp(out1 / "stats.csv") == slurp(out2 / "stats.csv"));
  const std::string csv = slurp(out1 / "stats.csv");
  CHECK(csv.find("success_rate,1,") != std::string::npos);  // all trials pass
}

TEST_CASE("mirror: exact N=1 report and bound comparison") {
  const fs::path dir = work_dir();
  spit(dir / "mirror.json",
       R"({"device":"maximally-mixed-copyable","delta":0.1,"N":1,"J":1,)"
       R"("seed":3,"trials":100})");
  const fs::path out = dir / "mirror_out";
  const int code = run("--config " + (dir / "mirror.json").string() +
                       " --out " + out.string() + " mirror");
  CHECK(code == 0);
  const std::string csv = slurp(out / "guessing_stats.csv");
  CHECK(csv.find("p_sss,0.5,") != std::string::npos);
  CHECK(csv.find("p_ss,0.5,") != std::string::npos);
  const std::string report = slurp(out / "bound_report.json");
  CHECK(report.find("\"verdict\":\"vacuous\"") != std::string::npos);
}

TEST_CASE("verify: bounds suite passes") {
  CHECK(run("verify bounds", work_dir() / "verify_bounds.txt") == 0);
  const std::string text = slurp(work_dir() / "verify_bounds.txt");
  CHECK(text.find("[PASS] bounds/compositional-identities") !=
        std::string::npos);
  CHECK(text.find("[FAIL]") == std::string::npos);
}

TEST_CASE("verify: unknown suite is a configuration error") {
  CHECK(run("verify nonsense") == 1);
}

TEST_CASE("game-value: classical value and seesaw on the builtin game") {
  const fs::path out = work_dir() / "gv.txt";
  CHECK(run("--seed 4 game-value --sweeps 40 --restarts 6", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("classical_value = 0") != std::string::npos);
  CHECK(text.find("seesaw_lower_bound = 0.13") != std::string::npos);
}

TEST_CASE("game-value: guessing-game transform with bound") {
  const fs::path out = work_dir() / "gv_gk.txt";
  CHECK(run("--seed 4 game-value --gk 64 --sweeps 30 --restarts 4", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("gk_classical_value = 0") != std::string::npos);
  CHECK(text.find("gk_value_bound = 1") != std::string::npos);
}
