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

#include <string>

#include "bellrand/bounds.hpp"
#include "bellrand/protocol.hpp"

namespace bellrand {

// Game definition files: {"n": int, "scores": [x][y][s][t]}. Score entries
// are written as exact "p/q" strings so that classical values survive a
// round trip; plain JSON numbers are accepted on input (converted exactly,
// doubles being dyadic rationals). A guessing game adds {"base":..., "K":...}.
std::string game_to_json(const BellGame& g);
BellGame game_from_json(const std::string& text);
std::string guessing_game_to_json(const GuessingGame& g);
GuessingGame guessing_game_from_json(const std::string& text);

// Matrix fixture format: {"dim": d, "data": [re, im, re, im, ...]},
// row-major interleaved real/imaginary parts.
std::string matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const std::string& text);

// Strategy files: {"factor_dims": [...], "state": <matrix>,
// "players": [[<matrix per outcome> per input] per player]}.
std::string strategy_to_json(const QuantumStrategy& s);
QuantumStrategy strategy_from_json(const std::string& text);

// Transcripts: one JSON object per line. The hash index and extracted bits
// appear only on success, hex-encoded.
std::string transcript_to_json_line(const Transcript& t, std::size_t trial);
std::string mirror_transcript_to_json_line(const MirrorTranscript& t,
                                           std::size_t trial);

// Versioned CSV schemas (first line is a schema comment).
extern const char* const kStatsCsvSchema;
extern const char* const kBoundsCsvSchema;
std::string stats_csv_header();
std::string stats_csv_row(const std::string& quantity, const WilsonEstimate& e);
std::string stats_csv_row_exact(const std::string& quantity, double value,
                                std::size_t trials);
std::string bound_report_csv_header();
std::string bound_report_csv_row(const BoundReport& r);
std::string bound_report_to_json(const BoundReport& r);

}  // namespace bellrand
