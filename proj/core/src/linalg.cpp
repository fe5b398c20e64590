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

#include "bellrand/linalg.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <stdexcept>

namespace bellrand {

namespace {

Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

Eigen::SelfAdjointEigenSolver<Matrix> eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(a));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  return solver;
}

double real_trace(const Matrix& a) { return a.trace().real(); }

}  // namespace

bool is_hermitian(const Matrix& a, double tolerance) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

void require_hermitian(const Matrix& a, const char* what) {
  if (!is_hermitian(a))
    throw std::invalid_argument(std::string(what) + ": matrix not Hermitian");
}

double trace_norm(const Matrix& a) {
  require_hermitian(a, "trace_norm");
  return eig(a).eigenvalues().cwiseAbs().sum();
}

double trace_norm_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace_norm_distance: dimension mismatch");
  require_hermitian(a, "trace_norm_distance");
  require_hermitian(b, "trace_norm_distance");
  return trace_norm(a - b);
}

Matrix matrix_sqrt(const Matrix& a) {
  const auto solver = eig(a);
  const auto& vals = solver.eigenvalues();
  if (vals.minCoeff() < -tol::psd)
    throw std::invalid_argument("matrix_sqrt: matrix not PSD");
  Eigen::VectorXd roots = vals.cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() *
         solver.eigenvectors().adjoint();
}

SupportInvSqrt pseudo_inv_sqrt(const Matrix& a) {
  const auto solver = eig(a);
  const auto& vals = solver.eigenvalues();
  if (vals.minCoeff() < -tol::psd)
    throw std::invalid_argument("pseudo_inv_sqrt: matrix not PSD");
  const double cut = std::max(vals.maxCoeff(), 0.0) * tol::support_cut;
  const Eigen::Index d = a.rows();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd proj = Eigen::VectorXd::Zero(d);
  SupportInvSqrt out;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (vals(i) > cut) {
      inv(i) = 1.0 / std::sqrt(vals(i));
      proj(i) = 1.0;
      ++out.rank;
    }
  }
  const Matrix& vects = solver.eigenvectors();
  out.inv_sqrt = vects * inv.asDiagonal() * vects.adjoint();
  out.support_proj = vects * proj.asDiagonal() * vects.adjoint();
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix embed_at(const Matrix& op, std::span<const Eigen::Index> dims,
                std::size_t slot) {
  if (slot >= dims.size())
    throw std::invalid_argument("embed_at: slot out of range");
  if (op.rows() != dims[slot])
    throw std::invalid_argument("embed_at: operator does not match factor");
  Eigen::Index before = 1, after = 1;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (j < slot) before *= dims[j];
    if (j > slot) after *= dims[j];
  }
  return kron(kron(Matrix::Identity(before, before), op),
              Matrix::Identity(after, after));
}

Matrix partial_trace(const Matrix& m, std::span<const Eigen::Index> dims,
                     std::span<const bool> keep) {
  if (dims.size() != keep.size())
    throw std::invalid_argument("partial_trace: dims/keep mismatch");
  Eigen::Index total = 1;
  for (auto d : dims) total *= d;
  if (m.rows() != total || m.cols() != total)
    throw std::invalid_argument("partial_trace: dimension mismatch");

  const std::size_t k = dims.size();
  std::vector<Eigen::Index> stride(k, 1);
  for (std::size_t j = k; j-- > 1;) stride[j - 1] = stride[j] * dims[j];

  std::vector<std::size_t> kept, traced;
  Eigen::Index kept_dim = 1, traced_dim = 1;
  for (std::size_t j = 0; j < k; ++j) {
    if (keep[j]) {
      kept.push_back(j);
      kept_dim *= dims[j];
    } else {
      traced.push_back(j);
      traced_dim *= dims[j];
    }
  }

  // Base offset of a composite index given digit values of a factor subset.
  auto offset = [&](const std::vector<std::size_t>& subset,
                    Eigen::Index flat) {
    Eigen::Index off = 0;
    for (std::size_t j = subset.size(); j-- > 0;) {
      const Eigen::Index d = dims[subset[j]];
      off += (flat % d) * stride[subset[j]];
      flat /= d;
    }
    return off;
  };

  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (Eigen::Index r = 0; r < kept_dim; ++r) {
    const Eigen::Index row_base = offset(kept, r);
    for (Eigen::Index c = 0; c < kept_dim; ++c) {
      const Eigen::Index col_base = offset(kept, c);
      Complex sum = 0;
      for (Eigen::Index t = 0; t < traced_dim; ++t) {
        const Eigen::Index toff = offset(traced, t);
        sum += m(row_base + toff, col_base + toff);
      }
      out(r, c) = sum;
    }
  }
  return out;
}

Matrix partial_trace_keeping(const Matrix& m,
                             std::span<const Eigen::Index> dims,
                             std::size_t keep_slot) {
  if (keep_slot >= dims.size())
    throw std::invalid_argument("partial_trace_keeping: slot out of range");
  std::unique_ptr<bool[]> keep(new bool[dims.size()]());
  keep[keep_slot] = true;
  return partial_trace(m, dims, std::span<const bool>(keep.get(), dims.size()));
}

// ---------------------------------------------------------------------------

DensityOperator DensityOperator::from_matrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw std::invalid_argument("DensityOperator: matrix must be square");
  require_hermitian(m, "DensityOperator");
  const auto solver = eig(m);
  if (solver.eigenvalues().minCoeff() < -tol::psd)
    throw std::invalid_argument("DensityOperator: negative eigenvalue");
  if (std::abs(real_trace(m) - 1.0) > tol::trace_one)
    throw std::invalid_argument("DensityOperator: trace != 1");
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  return DensityOperator(Matrix::Identity(dim, dim) /
                         static_cast<double>(dim));
}

DensityOperator DensityOperator::pure(const Vector& amplitudes) {
  if (std::abs(amplitudes.norm() - 1.0) > tol::unit_norm)
    throw std::invalid_argument("DensityOperator::pure: vector not unit norm");
  return DensityOperator(amplitudes * amplitudes.adjoint());
}

void PureState::validate() const {
  Eigen::Index prod = 1;
  for (auto d : factor_dims) prod *= d;
  if (prod != amplitudes.size())
    throw std::invalid_argument("PureState: factor dims do not multiply out");
  if (std::abs(amplitudes.norm() - 1.0) > tol::unit_norm)
    throw std::invalid_argument("PureState: vector not unit norm");
}

Povm::Povm(std::vector<CqLabel> outcomes, std::vector<Matrix> elements)
    : outcomes_(std::move(outcomes)), elements_(std::move(elements)) {
  if (elements_.empty() || outcomes_.size() != elements_.size())
    throw std::invalid_argument("Povm: outcomes/elements mismatch");
  const Eigen::Index d = elements_[0].rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : elements_) {
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("Povm: inconsistent element dimensions");
    require_hermitian(e, "Povm element");
    if (eig(e).eigenvalues().minCoeff() < -tol::psd)
      throw std::invalid_argument("Povm: element not PSD");
    sum += e;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::povm_sum)
    throw std::invalid_argument("Povm: elements do not sum to identity");
  for (std::size_t i = 0; i < outcomes_.size(); ++i)
    for (std::size_t j = i + 1; j < outcomes_.size(); ++j)
      if (outcomes_[i] == outcomes_[j])
        throw std::invalid_argument("Povm: duplicate outcome label");
}

Povm Povm::from_elements(std::vector<Matrix> elements) {
  std::vector<CqLabel> labels(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i)
    labels[i] = CqLabel{static_cast<std::int64_t>(i), 0};
  return Povm(std::move(labels), std::move(elements));
}

std::size_t Povm::index_of(CqLabel label) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i)
    if (outcomes_[i] == label) return i;
  throw std::out_of_range("Povm: no such outcome label");
}

bool Povm::is_projective(double tolerance) const {
  for (const auto& e : elements_)
    if ((e * e - e).cwiseAbs().maxCoeff() > tolerance) return false;
  return true;
}

void CqState::add_block(CqLabel label, const Matrix& block) {
  if (block.rows() != qdim_ || block.cols() != qdim_)
    throw std::invalid_argument("CqState: block dimension mismatch");
  auto [it, inserted] = blocks_.try_emplace(label, block);
  if (!inserted) it->second += block;
}

Matrix CqState::quantum_marginal() const {
  Matrix sum = Matrix::Zero(qdim_, qdim_);
  for (const auto& [label, block] : blocks_) sum += block;
  return sum;
}

CqState CqState::z_marginal() const {
  CqState out(qdim_);
  for (const auto& [label, block] : blocks_)
    out.add_block(CqLabel{0, label.z}, block);
  return out;
}

double CqState::total_trace() const {
  double t = 0;
  for (const auto& [label, block] : blocks_) t += real_trace(block);
  return t;
}

std::int64_t CqState::distinct_c() const {
  std::vector<std::int64_t> cs;
  for (const auto& [label, block] : blocks_) cs.push_back(label.c);
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  return static_cast<std::int64_t>(cs.size());
}

void CqState::validate() const {
  if (blocks_.empty()) throw std::invalid_argument("CqState: no blocks");
  for (const auto& [label, block] : blocks_) {
    require_hermitian(block, "CqState block");
    if (eig(block).eigenvalues().minCoeff() < -tol::psd)
      throw std::invalid_argument("CqState: block not PSD");
  }
  if (std::abs(total_trace() - 1.0) > tol::trace_one)
    throw std::invalid_argument("CqState: total trace != 1");
}

// ---------------------------------------------------------------------------

PureState canonical_purification(const DensityOperator& rho) {
  const Eigen::Index d = rho.dim();
  const Matrix root = matrix_sqrt(rho.matrix());
  Vector psi(d * d);
  // (sqrt(rho) ⊗ I) Σ_e e ⊗ e has amplitudes psi[(i,j)] = sqrt(rho)_{ij}.
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) psi(i * d + j) = root(i, j);
  psi.normalize();
  return PureState{std::move(psi), {d, d}};
}

Povm pretty_good_measurement(const CqState& alpha) {
  const Eigen::Index d = alpha.quantum_dim();
  if (alpha.blocks().empty())
    throw std::invalid_argument("pretty_good_measurement: no blocks");
  const auto support = pseudo_inv_sqrt(alpha.quantum_marginal());
  const Matrix off =
      Matrix::Identity(d, d) - support.support_proj;
  const double share = 1.0 / static_cast<double>(alpha.blocks().size());
  std::vector<CqLabel> labels;
  std::vector<Matrix> elements;
  for (const auto& [label, block] : alpha.blocks()) {
    labels.push_back(label);
    elements.push_back(
        hermitize(support.inv_sqrt * block * support.inv_sqrt + share * off));
  }
  return Povm(std::move(labels), std::move(elements));
}

Povm conjugate_povm(const Povm& m) {
  std::vector<Matrix> elements;
  elements.reserve(m.size());
  for (const auto& e : m.elements()) elements.push_back(e.conjugate());
  return Povm(m.outcomes(), std::move(elements));
}

double verify_mirror_identity(const DensityOperator& rho, const Povm& m) {
  const Eigen::Index d = rho.dim();
  if (m.dim() != d)
    throw std::invalid_argument("verify_mirror_identity: dimension mismatch");
  const PureState purified = canonical_purification(rho);
  const Matrix rho_hat = purified.projector();
  const std::array<Eigen::Index, 2> dims = {d, d};
  const std::array<bool, 2> keep_q = {true, false};

  CqState alpha(d);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Matrix measured = rho_hat * embed_at(m.element(i), dims, 1);
    alpha.add_block(m.outcomes()[i],
                    hermitize(partial_trace(measured, dims, keep_q)));
  }
  const Povm pgm = pretty_good_measurement(alpha);
  const Povm mirrored = conjugate_povm(m);
  const Matrix proj = pseudo_inv_sqrt(rho.matrix()).support_proj;

  double deviation = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Matrix diff =
        proj *
        (pgm.element(pgm.index_of(m.outcomes()[i])) - mirrored.element(i)) *
        proj;
    deviation = std::max(deviation, diff.cwiseAbs().maxCoeff());
  }
  return deviation;
}

namespace {

// Shared body of the dense and direct-sum guessing-bound computations. Adds
// one sector's contributions; the caller supplies (α^Q)^(-1/2) per sector.
struct PgpAccumulator {
  double f = 0, f_prime = 0, lhs = 0;

  void add_sector(const CqState& sector, std::int64_t c_size) {
    const Matrix inv = pseudo_inv_sqrt(sector.quantum_marginal()).inv_sqrt;
    Matrix a_succ =
        Matrix::Zero(sector.quantum_dim(), sector.quantum_dim());
    for (const auto& [label, block] : sector.blocks()) {
      if (label.z == kSucc) a_succ += block;
    }
    f += (a_succ * inv * a_succ * inv).trace().real();
    for (const auto& [label, block] : sector.blocks()) {
      if (label.z != kSucc) continue;
      f_prime += (block * inv * block * inv).trace().real();
    }
    const Matrix share = a_succ / static_cast<double>(c_size);
    for (std::int64_t c = 0; c < c_size; ++c) {
      auto it = sector.blocks().find(CqLabel{c, kSucc});
      if (it != sector.blocks().end())
        lhs += trace_norm(it->second - share);
      else
        lhs += trace_norm(share);  // zero block still deviates from uniform
    }
  }

};

std::int64_t resolve_c_size(const CqState& state, std::int64_t c_size) {
  if (c_size < 0) return state.distinct_c();
  for (const auto& [label, block] : state.blocks())
    if (label.c < 0 || label.c >= c_size)
      throw std::invalid_argument("pgp_bound_check: label outside alphabet");
  return c_size;
}

PgpBoundResult finish_pgp(PgpAccumulator& acc, std::int64_t c_size) {
  PgpBoundResult r;
  r.f = acc.f;
  r.f_prime = acc.f_prime;
  r.lhs = acc.lhs;
  const double disc = acc.f_prime * static_cast<double>(c_size) - acc.f;
  if (disc < -tol::inequality)
    throw std::logic_error("pgp_bound_check: f' |C| < f, computation bug");
  r.rhs = std::sqrt(std::max(disc, 0.0));
  return r;
}

}  // namespace

PgpBoundResult pgp_bound_check(const CqState& alpha,
                               std::int64_t c_alphabet_size) {
  for (const auto& [label, block] : alpha.blocks())
    if (label.z != kSucc && label.z != kAbort)
      throw std::invalid_argument("pgp_bound_check: flag must be succ/abort");
  const std::int64_t c_size = resolve_c_size(alpha, c_alphabet_size);

  // Dense path: build both pretty good measurements explicitly.
  const Povm r_full = pretty_good_measurement(alpha);
  const Povm r_z = pretty_good_measurement(alpha.z_marginal());

  const Eigen::Index d = alpha.quantum_dim();
  Matrix a_succ = Matrix::Zero(d, d);
  for (const auto& [label, block] : alpha.blocks())
    if (label.z == kSucc) a_succ += block;

  PgpBoundResult r;
  // R_succ exists only when some succ block does.
  for (std::size_t i = 0; i < r_z.size(); ++i)
    if (r_z.outcomes()[i].z == kSucc)
      r.f = (a_succ * r_z.element(i)).trace().real();
  for (std::size_t i = 0; i < r_full.size(); ++i) {
    const CqLabel label = r_full.outcomes()[i];
    if (label.z != kSucc) continue;
    const auto it = alpha.blocks().find(label);
    r.f_prime += (it->second * r_full.element(i)).trace().real();
  }
  const Matrix share = a_succ / static_cast<double>(c_size);
  for (std::int64_t c = 0; c < c_size; ++c) {
    auto it = alpha.blocks().find(CqLabel{c, kSucc});
    if (it != alpha.blocks().end())
      r.lhs += trace_norm(it->second - share);
    else
      r.lhs += trace_norm(share);
  }
  const double disc = r.f_prime * static_cast<double>(c_size) - r.f;
  if (disc < -tol::inequality)
    throw std::logic_error("pgp_bound_check: f' |C| < f, computation bug");
  r.rhs = std::sqrt(std::max(disc, 0.0));
  return r;
}

PgpBoundResult pgp_bound_check_sectored(std::span<const CqState> sectors,
                                        std::int64_t c_alphabet_size) {
  if (sectors.empty())
    throw std::invalid_argument("pgp_bound_check_sectored: no sectors");
  if (c_alphabet_size < 1)
    throw std::invalid_argument(
        "pgp_bound_check_sectored: alphabet size required");
  PgpAccumulator acc;
  for (const auto& sector : sectors) acc.add_sector(sector, c_alphabet_size);
  return finish_pgp(acc, c_alphabet_size);
}

GentleMeasurementResult gentle_measurement_disturbance(const CqState& alpha,
                                                       const Povm& m) {
  if (m.dim() != alpha.quantum_dim())
    throw std::invalid_argument(
        "gentle_measurement_disturbance: dimension mismatch");
  if (!m.is_projective())
    throw std::invalid_argument(
        "gentle_measurement_disturbance: measurement must be projective");

  GentleMeasurementResult out;
  double agree = 0;
  for (const auto& [label, block] : alpha.blocks()) {
    const Matrix& p = m.element(m.index_of(CqLabel{label.c, 0}));
    agree += (p * block).trace().real();
  }
  out.delta = std::clamp(1.0 - agree, 0.0, 1.0);

  for (const auto& [label, block] : alpha.blocks()) {
    Matrix mapped = Matrix::Zero(alpha.quantum_dim(), alpha.quantum_dim());
    for (const auto& p : m.elements()) mapped += p * block * p;
    out.disturbance += trace_norm(hermitize(mapped) - block);
  }
  return out;
}

// ---------------------------------------------------------------------------

Matrix random_hermitian(SplitMix64& rng, Eigen::Index dim) {
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      a(i, j) = Complex(rng.next_normal(), rng.next_normal());
  return hermitize(a);
}

DensityOperator random_density(SplitMix64& rng, Eigen::Index dim) {
  Matrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      g(i, j) = Complex(rng.next_normal(), rng.next_normal());
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator::from_matrix(hermitize(rho));
}

DensityOperator random_full_rank_density(SplitMix64& rng, Eigen::Index dim) {
  const Matrix rho = random_density(rng, dim).matrix();
  const Matrix mixed =
      0.5 * rho + 0.5 * Matrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityOperator::from_matrix(mixed);
}

Vector random_unit_vector(SplitMix64& rng, Eigen::Index dim) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    v(i) = Complex(rng.next_normal(), rng.next_normal());
  v.normalize();
  return v;
}

Povm random_projective_povm(SplitMix64& rng, Eigen::Index dim,
                            std::size_t outcomes) {
  const auto solver = eig(random_hermitian(rng, dim));
  std::vector<Matrix> elements(outcomes, Matrix::Zero(dim, dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Vector v = solver.eigenvectors().col(j);
    elements[static_cast<std::size_t>(j) % outcomes] += v * v.adjoint();
  }
  for (auto& e : elements) e = hermitize(e);
  return Povm::from_elements(std::move(elements));
}

CqState random_cq_state(SplitMix64& rng, Eigen::Index dim,
                        std::span<const CqLabel> labels) {
  std::vector<double> weights(labels.size());
  double total = 0;
  for (auto& w : weights) {
    w = -std::log(rng.next_double_open());
    total += w;
  }
  CqState state(dim);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    state.add_block(labels[i],
                    (weights[i] / total) * random_density(rng, dim).matrix());
  }
  return state;
}

}  // namespace bellrand
