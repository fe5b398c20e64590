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

#include <doctest.h>

#include <array>

#include "bellrand/linalg.hpp"
#include "oracles.hpp"

using namespace bellrand;

namespace {

Matrix pauli_y() {
  Matrix y(2, 2);
  y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return y;
}

Vector basis_vec(Eigen::Index dim, Eigen::Index i) {
  Vector v = Vector::Zero(dim);
  v(i) = 1;
  return v;
}

}  // namespace

TEST_CASE("trace norm distance: axioms and the SVD oracle") {
  SplitMix64 rng(101);
  const Matrix a = random_hermitian(rng, 3);
  const Matrix b = random_hermitian(rng, 3);
  // Frozen independent oracle: sum of singular values of the difference.
  CHECK(trace_norm_distance(a, b) ==
        doctest::Approx(oracles::trace_norm_by_svd(a - b)).epsilon(1e-10));

  const DensityOperator rho = random_density(rng, 3);
  CHECK(trace_norm_distance(rho.matrix(), rho.matrix()) ==
        doctest::Approx(0.0));

  // Orthogonal pure states saturate the norm at 2.
  const Matrix p0 = basis_vec(2, 0) * basis_vec(2, 0).adjoint();
  const Matrix p1 = basis_vec(2, 1) * basis_vec(2, 1).adjoint();
  CHECK(trace_norm_distance(p0, p1) == doctest::Approx(2.0));

  CHECK_THROWS(trace_norm_distance(Matrix::Identity(2, 2),
                                   Matrix::Identity(3, 3)));
  Matrix skew(2, 2);
  skew << 0, 1, 0, 0;
  CHECK_THROWS(trace_norm_distance(skew, skew));
}

TEST_CASE("canonical purification marginals") {
  // Pure input purifies to a product: |0><0| -> |0> ⊗ |0>.
  const DensityOperator ket0 = DensityOperator::pure(basis_vec(2, 0));
  const PureState p0 = canonical_purification(ket0);
  CHECK((p0.amplitudes - basis_vec(4, 0)).norm() < 1e-12);

  // Maximally mixed qubit purifies to the maximally entangled pair.
  const PureState bell =
      canonical_purification(DensityOperator::maximally_mixed(2));
  Vector expected(4);
  expected << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  CHECK((bell.amplitudes - expected).norm() < 1e-12);

  // Random state: both marginals recovered through the index-loop oracle.
  SplitMix64 rng(5);
  const DensityOperator rho = random_density(rng, 3);
  const PureState purified = canonical_purification(rho);
  const Matrix hat = purified.projector();
  CHECK((oracles::partial_trace_two(hat, 3, 3, 0) - rho.matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  CHECK((oracles::partial_trace_two(hat, 3, 3, 1) -
         rho.matrix().transpose())
            .cwiseAbs()
            .maxCoeff() < 1e-10);

  // Rank-deficient states purify just as well.
  Matrix rank1 = basis_vec(3, 1) * basis_vec(3, 1).adjoint();
  const PureState deficient =
      canonical_purification(DensityOperator::from_matrix(rank1));
  CHECK((oracles::partial_trace_two(deficient.projector(), 3, 3, 0) - rank1)
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("library partial trace agrees with the scatter oracle") {
  SplitMix64 rng(6);
  Matrix m(6, 6);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j)
      m(i, j) = Complex(rng.next_normal(), rng.next_normal());
  const std::array<Eigen::Index, 2> dims = {2, 3};
  const std::array<bool, 2> keep0 = {true, false};
  const std::array<bool, 2> keep1 = {false, true};
  CHECK((partial_trace(m, dims, keep0) -
         oracles::partial_trace_two(m, 2, 3, 0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((partial_trace(m, dims, keep1) -
         oracles::partial_trace_two(m, 2, 3, 1)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(partial_trace_keeping(m, dims, 1).isApprox(
      partial_trace(m, dims, keep1)));
}

TEST_CASE("pretty good measurement on distinguishable blocks") {
  // Orthogonal blocks: the PGM is the projective measurement onto them.
  const Eigen::Index dim = 3;
  CqState alpha(dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    alpha.add_block(CqLabel{c, 0},
                    basis_vec(dim, c) * basis_vec(dim, c).adjoint() / 3.0);
  const Povm pgm = pretty_good_measurement(alpha);
  double guess = 0;
  for (std::size_t i = 0; i < pgm.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(pgm.outcomes()[i].c);
    CHECK((pgm.element(i) -
           basis_vec(dim, c) * basis_vec(dim, c).adjoint())
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    guess += (pgm.element(i) * alpha.blocks().at(pgm.outcomes()[i])).trace().real();
  }
  CHECK(guess == doctest::Approx(1.0));  // perfectly distinguishable
}

TEST_CASE("pretty good measurement on a product state is uniform") {
  SplitMix64 rng(7);
  const Matrix rho = random_density(rng, 4).matrix();
  const std::int64_t labels = 3;
  CqState alpha(4);
  for (std::int64_t c = 0; c < labels; ++c)
    alpha.add_block(CqLabel{c, 0}, rho / static_cast<double>(labels));
  const Povm pgm = pretty_good_measurement(alpha);
  double guess = 0;
  for (std::size_t i = 0; i < pgm.size(); ++i) {
    CHECK((pgm.element(i) - Matrix::Identity(4, 4) / 3.0)
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    guess += (pgm.element(i) * alpha.blocks().at(pgm.outcomes()[i])).trace().real();
  }
  CHECK(guess == doctest::Approx(1.0 / 3));  // no better than random
}

TEST_CASE("pretty good measurement completes off the support") {
  // Blocks confined to a 2-dimensional subspace of a 4-dimensional register.
  CqState alpha(4);
  alpha.add_block(CqLabel{0, 0}, basis_vec(4, 0) * basis_vec(4, 0).adjoint() * 0.5);
  alpha.add_block(CqLabel{1, 0}, basis_vec(4, 1) * basis_vec(4, 1).adjoint() * 0.5);
  const Povm pgm = pretty_good_measurement(alpha);
  Matrix sum = Matrix::Zero(4, 4);
  for (const auto& e : pgm.elements()) sum += e;
  CHECK((sum - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-9);
  // The off-support projector is split evenly: each element gets half of
  // the span of the two unused basis vectors.
  CHECK(pgm.element(0)(2, 2).real() == doctest::Approx(0.5));
  CHECK(pgm.element(1)(3, 3).real() == doctest::Approx(0.5));
}

TEST_CASE("conjugation fixes real measurements and swaps sigma-y projectors") {
  SplitMix64 rng(8);
  const Povm real_m = random_projective_povm(rng, 3, 2);
  bool all_real = true;
  for (const auto& e : real_m.elements())
    if (e.imag().cwiseAbs().maxCoeff() > 1e-12) all_real = false;
  if (all_real) {
    const Povm conj = conjugate_povm(real_m);
    for (std::size_t i = 0; i < conj.size(); ++i)
      CHECK((conj.element(i) - real_m.element(i)).cwiseAbs().maxCoeff() <
            1e-12);
  }

  std::vector<Matrix> y_elems = {0.5 * (Matrix::Identity(2, 2) + pauli_y()),
                                 0.5 * (Matrix::Identity(2, 2) - pauli_y())};
  const Povm y_povm = Povm::from_elements(std::move(y_elems));
  const Povm y_conj = conjugate_povm(y_povm);
  CHECK((y_conj.element(0) - y_povm.element(1)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((y_conj.element(1) - y_povm.element(0)).cwiseAbs().maxCoeff() < 1e-12);

  // Conjugation is an involution.
  const Povm random_m = random_projective_povm(rng, 4, 3);
  const Povm twice = conjugate_povm(conjugate_povm(random_m));
  for (std::size_t i = 0; i < twice.size(); ++i)
    CHECK((twice.element(i) - random_m.element(i)).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("mirror identity: diagonal case, sigma-y case, random case") {
  // Full-rank diagonal state with a computational measurement: the PGM is
  // the computational measurement itself.
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  const DensityOperator rho = DensityOperator::from_matrix(diag);
  std::vector<Matrix> comp = {basis_vec(2, 0) * basis_vec(2, 0).adjoint(),
                              basis_vec(2, 1) * basis_vec(2, 1).adjoint()};
  CHECK(verify_mirror_identity(rho, Povm::from_elements(std::move(comp))) <
        1e-12);

  // Sigma-y measurement: the PGM equals the conjugated (swapped) projectors;
  // the deviation reported against conjugate_povm must vanish, and the
  // direct formula sqrt(rho) conj(R) sqrt(rho) reproduces the blocks.
  std::vector<Matrix> y_elems = {0.5 * (Matrix::Identity(2, 2) + pauli_y()),
                                 0.5 * (Matrix::Identity(2, 2) - pauli_y())};
  const Povm y_povm = Povm::from_elements(std::move(y_elems));
  CHECK(verify_mirror_identity(rho, y_povm) < 1e-10);

  const Matrix root = matrix_sqrt(rho.matrix());
  const PureState purified = canonical_purification(rho);
  const std::array<Eigen::Index, 2> dims = {2, 2};
  for (std::size_t c = 0; c < 2; ++c) {
    const Matrix measured =
        purified.projector() * embed_at(y_povm.element(c), dims, 1);
    const Matrix block = partial_trace_keeping(measured, dims, 0);
    const Matrix expected = root * y_povm.element(c).conjugate() * root;
    CHECK((block - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  // Random full-rank states over growing dimensions.
  SplitMix64 rng(9);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index dim = 2 + trial % 4;
    const DensityOperator state = random_full_rank_density(rng, dim);
    const Povm m = random_projective_povm(rng, dim, 2 + trial % 2);
    CHECK(verify_mirror_identity(state, m) <= tol::mirror);
  }
}

TEST_CASE("guessing bound: uniform case, orthogonal case, random sweep") {
  // C uniform and independent of Q given succ: both sides vanish.
  SplitMix64 rng(10);
  const Matrix rho = random_density(rng, 3).matrix();
  CqState uniform(3);
  for (std::int64_t c = 0; c < 2; ++c)
    uniform.add_block(CqLabel{c, kSucc}, rho * 0.5);
  const auto u = pgp_bound_check(uniform);
  CHECK(u.lhs == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(u.rhs == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(u.f_prime == doctest::Approx(u.f / 2));

  // Orthogonal succ blocks with no abort mass: closed forms
  // lhs = 2(|C|-1)/|C|, rhs = sqrt(|C|-1), f = f' = 1.
  for (const std::int64_t c_size : {2, 3, 4}) {
    CqState ortho(4);
    for (std::int64_t c = 0; c < c_size; ++c)
      ortho.add_block(CqLabel{c, kSucc},
                      basis_vec(4, c) * basis_vec(4, c).adjoint() /
                          static_cast<double>(c_size));
    const auto r = pgp_bound_check(ortho);
    CHECK(r.f == doctest::Approx(1.0));
    CHECK(r.f_prime == doctest::Approx(1.0));
    CHECK(r.lhs == doctest::Approx(2.0 * (c_size - 1) / c_size));
    CHECK(r.rhs == doctest::Approx(std::sqrt(static_cast<double>(c_size - 1))));
    CHECK(r.lhs <= r.rhs + tol::inequality);
  }

  // Random states never violate the bound.
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index dim = 2 + trial % 3;
    const std::int64_t c_size = 2 + trial % 3;
    std::vector<CqLabel> labels;
    for (std::int64_t c = 0; c < c_size; ++c) {
      labels.push_back(CqLabel{c, kSucc});
      labels.push_back(CqLabel{c, kAbort});
    }
    const CqState alpha = random_cq_state(rng, dim, labels);
    const auto r = pgp_bound_check(alpha, c_size);
    CHECK(r.lhs <= r.rhs + tol::inequality);
  }
}

TEST_CASE("sectored guessing bound equals the dense computation") {
  SplitMix64 rng(11);
  // Two sectors of dimension 2, embedded densely as a direct sum on dim 4.
  std::vector<CqState> sectors;
  CqState dense(4);
  std::vector<CqLabel> labels = {CqLabel{0, kSucc}, CqLabel{1, kSucc},
                                 CqLabel{0, kAbort}};
  for (int sec = 0; sec < 2; ++sec) {
    CqState sector(2);
    for (const auto& label : labels) {
      Matrix block = random_density(rng, 2).matrix() / 6.0;
      sector.add_block(label, block);
      Matrix embedded = Matrix::Zero(4, 4);
      embedded.block(2 * sec, 2 * sec, 2, 2) = block;
      dense.add_block(label, embedded);
    }
    sectors.push_back(std::move(sector));
  }
  const auto direct = pgp_bound_check(dense, 2);
  const auto split = pgp_bound_check_sectored(sectors, 2);
  CHECK(direct.f == doctest::Approx(split.f).epsilon(1e-10));
  CHECK(direct.f_prime == doctest::Approx(split.f_prime).epsilon(1e-10));
  CHECK(direct.lhs == doctest::Approx(split.lhs).epsilon(1e-10));
  CHECK(direct.rhs == doctest::Approx(split.rhs).epsilon(1e-10));
}

TEST_CASE("gentle measurement: perfect prediction, mixed case, random sweep") {
  SplitMix64 rng(12);
  // Blocks inside the projector ranges: delta = 0 and no disturbance.
  const Povm m = random_projective_povm(rng, 4, 2);
  CqState clean(4);
  for (std::int64_t c = 0; c < 2; ++c) {
    const Matrix& p = m.element(static_cast<std::size_t>(c));
    Matrix block = p * random_density(rng, 4).matrix() * p;
    clean.add_block(CqLabel{c, 0}, 0.5 * block / block.trace().real());
  }
  const auto perfect = gentle_measurement_disturbance(clean, m);
  CHECK(perfect.delta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(perfect.disturbance <= 1e-10);

  // Uniform qubit blocks against the computational measurement: the channel
  // dephases nothing, so delta = 1/2 with zero disturbance; the bound
  // 4 sqrt(1/2) holds slackly.
  CqState mixed(2);
  for (std::int64_t c = 0; c < 2; ++c)
    mixed.add_block(CqLabel{c, 0}, Matrix::Identity(2, 2) / 4.0);
  std::vector<Matrix> comp = {basis_vec(2, 0) * basis_vec(2, 0).adjoint(),
                              basis_vec(2, 1) * basis_vec(2, 1).adjoint()};
  const auto half = gentle_measurement_disturbance(
      mixed, Povm::from_elements(std::move(comp)));
  CHECK(half.delta == doctest::Approx(0.5));
  CHECK(half.disturbance == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(half.disturbance <= 4 * std::sqrt(half.delta));

  // Random sweep.
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index dim = 2 + trial % 3;
    const std::size_t c_size = 2 + static_cast<std::size_t>(trial % 2);
    const Povm meas = random_projective_povm(rng, dim, c_size);
    std::vector<CqLabel> labels;
    for (std::size_t c = 0; c < c_size; ++c)
      labels.push_back(CqLabel{static_cast<std::int64_t>(c), 0});
    const CqState alpha = random_cq_state(rng, dim, labels);
    const auto r = gentle_measurement_disturbance(alpha, meas);
    CHECK(r.disturbance <= 4 * std::sqrt(r.delta) + tol::inequality);
  }

  // Non-projective measurements are rejected.
  std::vector<Matrix> fuzzy = {0.5 * Matrix::Identity(2, 2),
                               0.5 * Matrix::Identity(2, 2)};
  CHECK_THROWS(gentle_measurement_disturbance(
      mixed, Povm::from_elements(std::move(fuzzy))));
}

TEST_CASE("validation guards") {
  CHECK_THROWS(DensityOperator::from_matrix(Matrix::Identity(2, 2)));  // trace 2
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -0.5;
  neg(0, 0) = 1.5;
  CHECK_THROWS(DensityOperator::from_matrix(neg));
  std::vector<Matrix> incomplete = {0.5 * Matrix::Identity(2, 2)};
  CHECK_THROWS(Povm::from_elements(std::move(incomplete)));
  CqState state(2);
  state.add_block(CqLabel{0, 0}, Matrix::Identity(2, 2));  // trace 2
  CHECK_THROWS(state.validate());
}
