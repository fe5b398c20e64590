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

namespace bellrand::tol {

// Numerical tolerance table. Every tolerance used by the library lives here;
// values are sized for the error budget of double-precision Hermitian
// eigendecompositions on matrices of dimension up to a few thousand.

// Validation of Hermiticity, eigenvalue positivity, and unit trace.
inline constexpr double hermitian = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double unit_norm = 1e-10;
inline constexpr double projective = 1e-10;

// POVM completeness (elements summing to identity).
inline constexpr double povm_sum = 1e-9;

// Relative eigenvalue cutoff defining the numerical support of a PSD
// operator (pseudo-inverse / inverse square root).
inline constexpr double support_cut = 1e-12;

// Mirror-measurement identity deviation for full-rank states.
inline constexpr double mirror = 1e-8;

// Slack granted to analytic inequalities checked on computed quantities.
inline constexpr double inequality = 1e-9;

// Exact-rational checks evaluated in floating point.
inline constexpr double rational_eval = 1e-12;

// Score comparisons against pinned closed-form values.
inline constexpr double score = 1e-6;

// Relative tolerance for closed-form bound identities.
inline constexpr double bound_identity = 1e-12;

}  // namespace bellrand::tol
