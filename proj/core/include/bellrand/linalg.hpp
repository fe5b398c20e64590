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

#include <Eigen/Dense>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bellrand/constants.hpp"
#include "bellrand/rng.hpp"

namespace bellrand {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Basic numerics. Hermitian eigendecomposition is the single primitive here;
// square roots, pseudo-inverses and trace norms all route through it so that
// results are deterministic.

bool is_hermitian(const Matrix& a, double tolerance = tol::hermitian);
void require_hermitian(const Matrix& a, const char* what);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const Matrix& a);
/// Trace-norm distance between two Hermitian matrices of equal dimension.
double trace_norm_distance(const Matrix& a, const Matrix& b);

/// Principal square root of a Hermitian PSD matrix.
Matrix matrix_sqrt(const Matrix& a);

/// Pseudo-inverse square root restricted to the numerical support
/// (eigenvalues above tol::support_cut relative to the largest).
struct SupportInvSqrt {
  Matrix inv_sqrt;       // (a)^(-1/2) on the support, zero elsewhere
  Matrix support_proj;   // projector onto the support
  Eigen::Index rank = 0;
};
SupportInvSqrt pseudo_inv_sqrt(const Matrix& a);

Matrix kron(const Matrix& a, const Matrix& b);
/// Identity ⊗ ... ⊗ op ⊗ ... ⊗ identity with op at the given factor slot.
Matrix embed_at(const Matrix& op, std::span<const Eigen::Index> dims,
                std::size_t slot);
/// Partial trace keeping the factors flagged in `keep`.
Matrix partial_trace(const Matrix& m, std::span<const Eigen::Index> dims,
                     std::span<const bool> keep);
/// Partial trace keeping exactly one factor.
Matrix partial_trace_keeping(const Matrix& m,
                             std::span<const Eigen::Index> dims,
                             std::size_t keep_slot);

// ---------------------------------------------------------------------------
// Domain types.

/// Density operator: Hermitian, PSD, unit trace (each within tolerance).
class DensityOperator {
 public:
  /// The trivial one-dimensional state.
  DensityOperator() : mat_(Matrix::Identity(1, 1)) {}

  static DensityOperator from_matrix(Matrix m);
  static DensityOperator maximally_mixed(Eigen::Index dim);
  static DensityOperator pure(const Vector& amplitudes);

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }

 private:
  explicit DensityOperator(Matrix m) : mat_(std::move(m)) {}
  Matrix mat_;
};

/// Unit vector with a declared tensor-factor structure.
struct PureState {
  Vector amplitudes;
  std::vector<Eigen::Index> factor_dims;

  Eigen::Index dim() const { return amplitudes.size(); }
  Matrix projector() const { return amplitudes * amplitudes.adjoint(); }
  void validate() const;
};

/// Classical label attached to a measurement outcome or cq-state block: a
/// value c and a flag z. Where the flag register is meaningful, z = 1 means
/// succ and z = 0 means abort; states without a flag register use z = 0.
struct CqLabel {
  std::int64_t c = 0;
  std::int64_t z = 0;
  auto operator<=>(const CqLabel&) const = default;
};

inline constexpr std::int64_t kAbort = 0;
inline constexpr std::int64_t kSucc = 1;

/// POVM: labelled PSD elements summing to identity.
class Povm {
 public:
  Povm(std::vector<CqLabel> outcomes, std::vector<Matrix> elements);
  /// Elements labelled c = 0..k-1.
  static Povm from_elements(std::vector<Matrix> elements);

  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.empty() ? 0 : elements_[0].rows(); }
  const std::vector<CqLabel>& outcomes() const { return outcomes_; }
  const Matrix& element(std::size_t i) const { return elements_[i]; }
  const std::vector<Matrix>& elements() const { return elements_; }
  /// Index of the outcome with the given label; throws if absent.
  std::size_t index_of(CqLabel label) const;

  bool is_projective(double tolerance = tol::projective) const;

 private:
  std::vector<CqLabel> outcomes_;
  std::vector<Matrix> elements_;
};

/// Classical-quantum state: subnormalized PSD blocks keyed by classical
/// label, summing to unit total trace.
class CqState {
 public:
  explicit CqState(Eigen::Index quantum_dim) : qdim_(quantum_dim) {}

  Eigen::Index quantum_dim() const { return qdim_; }
  const std::map<CqLabel, Matrix>& blocks() const { return blocks_; }

  /// Adds (accumulating) a subnormalized block.
  void add_block(CqLabel label, const Matrix& block);

  /// Σ_labels block: the reduced state on Q (trace 1 when validated).
  Matrix quantum_marginal() const;
  /// Blocks grouped by flag value z (classical register C traced out).
  CqState z_marginal() const;
  double total_trace() const;
  /// Number of distinct c values among the blocks.
  std::int64_t distinct_c() const;

  /// Checks PSD blocks and unit total trace; throws on violation.
  void validate() const;

 private:
  Eigen::Index qdim_;
  std::map<CqLabel, Matrix> blocks_;
};

// ---------------------------------------------------------------------------
// Operations.

/// The canonical purification of rho on Q ⊗ Q': the normalized vector
/// (sqrt(rho) ⊗ I) Σ_e e ⊗ e. Its marginals are rho on Q and rho^T on Q'.
PureState canonical_purification(const DensityOperator& rho);

/// The pretty good measurement induced by a cq-state on its quantum part:
/// elements (α^Q)^(-1/2) α_c (α^Q)^(-1/2) on the support of α^Q, with the
/// off-support projector split uniformly across outcomes so the result is a
/// complete POVM even for singular α^Q.
Povm pretty_good_measurement(const CqState& alpha);

/// Entrywise complex conjugate in the fixed computational basis.
Povm conjugate_povm(const Povm& m);

/// Measures Q' of the canonical purification of rho with m, forms the PGM on
/// Q, and returns the maximum elementwise deviation (on the support of rho)
/// from the conjugated measurement. For full-rank rho this is <= tol::mirror.
double verify_mirror_identity(const DensityOperator& rho, const Povm& m);

/// The two sides of the guessing-vs-uniformity inequality for a state
/// classical on C and the succ/abort flag:
///   lhs = || α_succ^{QC} - α_succ^Q ⊗ U_C ||_1,  rhs = sqrt(f' |C| - f).
struct PgpBoundResult {
  double lhs = 0, rhs = 0, f = 0, f_prime = 0;
};
/// `c_alphabet_size` is |C|; pass -1 to use the number of distinct c values
/// in the blocks (labels must lie in [0, |C|) when given explicitly).
PgpBoundResult pgp_bound_check(const CqState& alpha,
                               std::int64_t c_alphabet_size = -1);
/// Same computation on a direct sum of sectors: the state is the
/// block-diagonal union of the given cq-states (total trace 1 across all).
PgpBoundResult pgp_bound_check_sectored(std::span<const CqState> sectors,
                                        std::int64_t c_alphabet_size);

/// Measurement disturbance of a projective measurement whose outcome predicts
/// the classical register. delta = 1 - Σ_c Tr(P^c α_c) is the disagreement
/// probability; disturbance applies the channel X -> Σ_c P^c X P^c to the
/// quantum part of every block (cross-outcome terms included) and sums the
/// per-block trace distances. Satisfies disturbance <= 4 sqrt(delta).
struct GentleMeasurementResult {
  double disturbance = 0, delta = 0;
};
GentleMeasurementResult gentle_measurement_disturbance(const CqState& alpha,
                                                       const Povm& m);

// ---------------------------------------------------------------------------
// Seeded random instances (shared by property tests, the verify suites, and
// seesaw initialization).

Matrix random_hermitian(SplitMix64& rng, Eigen::Index dim);
DensityOperator random_density(SplitMix64& rng, Eigen::Index dim);
/// Mixture with the maximally mixed state; smallest eigenvalue >= 1/(2 dim).
DensityOperator random_full_rank_density(SplitMix64& rng, Eigen::Index dim);
Vector random_unit_vector(SplitMix64& rng, Eigen::Index dim);
/// Random projective measurement with `outcomes` elements (eigenvector
/// subspaces of a random Hermitian, split round-robin; empty groups allowed
/// when outcomes > dim).
Povm random_projective_povm(SplitMix64& rng, Eigen::Index dim,
                            std::size_t outcomes);
/// Random cq-state with the given labels and random block weights.
CqState random_cq_state(SplitMix64& rng, Eigen::Index dim,
                        std::span<const CqLabel> labels);

}  // namespace bellrand
