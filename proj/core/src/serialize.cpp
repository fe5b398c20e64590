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

#include "bellrand/serialize.hpp"

#include <json.hpp>
#include <sstream>

namespace bellrand {

namespace {

using nlohmann::json;

json rational_to_json(const Rational& r) {
  if (r.den() == 1) return json(r.num());
  return json(r.to_string());
}

Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>(), 1);
  if (j.is_number_float()) return Rational::from_double(j.get<double>());
  throw std::invalid_argument("score entry must be a number or \"p/q\"");
}

json game_to_json_obj(const BellGame& g) {
  const int n = g.n();
  json scores = json::array();
  for (int x = 0; x < n; ++x) {
    json jx = json::array();
    for (int y = 0; y < n; ++y) {
      json jy = json::array();
      for (int s = 0; s < n; ++s) {
        json js = json::array();
        for (int t = 0; t < n; ++t) js.push_back(rational_to_json(g.score(x, y, s, t)));
        jy.push_back(std::move(js));
      }
      jx.push_back(std::move(jy));
    }
    scores.push_back(std::move(jx));
  }
  return json{{"n", n}, {"scores", std::move(scores)}};
}

BellGame game_from_json_obj(const json& j) {
  if (!j.contains("n") || !j.contains("scores"))
    throw std::invalid_argument("game file: need fields n and scores");
  const int n = j.at("n").get<int>();
  std::vector<Rational> table;
  table.reserve(static_cast<std::size_t>(n) * n * n * static_cast<std::size_t>(n));
  const auto& scores = j.at("scores");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          table.push_back(rational_from_json(scores.at(x).at(y).at(s).at(t)));
  return BellGame(n, std::move(table));
}

json matrix_to_json_obj(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      data.push_back(m(i, j).real());
      data.push_back(m(i, j).imag());
    }
  }
  return json{{"dim", m.rows()}, {"data", std::move(data)}};
}

Matrix matrix_from_json_obj(const json& j) {
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != 2 * dim * dim)
    throw std::invalid_argument("matrix fixture: data length mismatch");
  Matrix m(dim, dim);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index jj = 0; jj < dim; ++jj) {
      const double re = data.at(k).get<double>();
      const double im = data.at(k + 1).get<double>();
      m(i, jj) = Complex(re, im);
      k += 2;
    }
  }
  return m;
}

json strategy_to_json_obj(const QuantumStrategy& s) {
  json players = json::array();
  for (const auto& family : s.measurements) {
    json inputs = json::array();
    for (const auto& povm : family) {
      json elements = json::array();
      for (const auto& e : povm.elements()) elements.push_back(matrix_to_json_obj(e));
      inputs.push_back(std::move(elements));
    }
    players.push_back(std::move(inputs));
  }
  return json{{"factor_dims", s.factor_dims},
              {"state", matrix_to_json_obj(s.state.matrix())},
              {"players", std::move(players)}};
}

QuantumStrategy strategy_from_json_obj(const json& j) {
  QuantumStrategy s;
  s.factor_dims = j.at("factor_dims").get<std::vector<Eigen::Index>>();
  s.state = DensityOperator::from_matrix(matrix_from_json_obj(j.at("state")));
  for (const auto& player : j.at("players")) {
    std::vector<Povm> family;
    for (const auto& input : player) {
      std::vector<Matrix> elements;
      for (const auto& e : input) elements.push_back(matrix_from_json_obj(e));
      family.push_back(Povm::from_elements(std::move(elements)));
    }
    s.measurements.push_back(std::move(family));
  }
  return s;
}

json transcript_to_json_obj(const Transcript& t, std::size_t trial) {
  json j{{"trial", trial}, {"x", t.x},         {"y", t.y},
         {"s", t.s},       {"t", t.t},         {"avg_score", t.avg_score},
         {"succ", t.succ}};
  if (t.succ && t.f_index.has_value()) {
    j["f_a"] = t.f_index->a.to_hex();
    j["f_b"] = t.f_index->b.to_hex();
  }
  if (t.v_bits.has_value()) j["v"] = t.v_bits->to_hex();
  return j;
}

}  // namespace

std::string game_to_json(const BellGame& g) { return game_to_json_obj(g).dump(); }

BellGame game_from_json(const std::string& text) {
  return game_from_json_obj(json::parse(text));
}

std::string guessing_game_to_json(const GuessingGame& g) {
  return json{{"base", game_to_json_obj(g.base())},
              {"K", rational_to_json(g.penalty())}}
      .dump();
}

GuessingGame guessing_game_from_json(const std::string& text) {
  const json j = json::parse(text);
  return GuessingGame(game_from_json_obj(j.at("base")),
                      rational_from_json(j.at("K")));
}

std::string matrix_to_json(const Matrix& m) {
  return matrix_to_json_obj(m).dump();
}

Matrix matrix_from_json(const std::string& text) {
  return matrix_from_json_obj(json::parse(text));
}

std::string strategy_to_json(const QuantumStrategy& s) {
  return strategy_to_json_obj(s).dump();
}

QuantumStrategy strategy_from_json(const std::string& text) {
  return strategy_from_json_obj(json::parse(text));
}

std::string transcript_to_json_line(const Transcript& t, std::size_t trial) {
  return transcript_to_json_obj(t, trial).dump();
}

std::string mirror_transcript_to_json_line(const MirrorTranscript& t,
                                           std::size_t trial) {
  json j = transcript_to_json_obj(t.referee, trial);
  j["s_p"] = t.s_prime;
  j["t_p"] = t.t_prime;
  j["avg_score_p"] = t.avg_score_prime;
  j["succ_p"] = t.succ_prime;
  if (t.v_prime.has_value()) j["v_p"] = t.v_prime->to_hex();
  return j.dump();
}

const char* const kStatsCsvSchema = "# bellrand.stats.v1";
const char* const kBoundsCsvSchema = "# bellrand.bounds.v1";

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string stats_csv_header() {
  return std::string(kStatsCsvSchema) +
         "\nquantity,estimate,ci_lo,ci_hi,trials\n";
}

std::string stats_csv_row(const std::string& quantity,
                          const WilsonEstimate& e) {
  return quantity + "," + fmt(e.p) + "," + fmt(e.ci_lo) + "," + fmt(e.ci_hi) +
         "," + std::to_string(e.trials) + "\n";
}

std::string stats_csv_row_exact(const std::string& quantity, double value,
                                std::size_t trials) {
  return quantity + "," + fmt(value) + "," + fmt(value) + "," + fmt(value) +
         "," + std::to_string(trials) + "\n";
}

std::string bound_report_csv_header() {
  return std::string(kBoundsCsvSchema) +
         "\nname,N,delta,n,J,K,bound,measured,ci_lo,ci_hi,trials,verdict\n";
}

namespace {

std::string opt_field(double v) { return v < 0 ? "" : fmt(v); }

}  // namespace

std::string bound_report_csv_row(const BoundReport& r) {
  return r.name + "," + opt_field(r.rounds) + "," + opt_field(r.delta) + "," +
         (r.n < 0 ? "" : std::to_string(r.n)) + "," + opt_field(r.j_bits) +
         "," + opt_field(r.penalty) + "," + fmt(r.bound) + "," +
         fmt(r.measured) + "," +
         (r.ci_lo ? fmt(*r.ci_lo) : "") + "," +
         (r.ci_hi ? fmt(*r.ci_hi) : "") + "," + std::to_string(r.trials) +
         "," + to_string(r.verdict) + "\n";
}

std::string bound_report_to_json(const BoundReport& r) {
  json j{{"name", r.name},
         {"bound", r.bound},
         {"measured", r.measured},
         {"trials", r.trials},
         {"trivial_max", r.trivial_max},
         {"verdict", to_string(r.verdict)}};
  if (r.rounds >= 0) j["N"] = r.rounds;
  if (r.delta >= 0) j["delta"] = r.delta;
  if (r.n >= 0) j["n"] = r.n;
  if (r.j_bits >= 0) j["J"] = r.j_bits;
  if (r.penalty >= 0) j["K"] = r.penalty;
  if (r.ci_lo) j["ci_lo"] = *r.ci_lo;
  if (r.ci_hi) j["ci_hi"] = *r.ci_hi;
  return j.dump();
}

}  // namespace bellrand
