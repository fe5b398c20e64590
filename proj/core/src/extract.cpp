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

#include "bellrand/extract.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bellrand {

namespace {

std::size_t ceil_log2_u64(std::uint64_t x) {
  if (x < 2) throw std::invalid_argument("hash family: set size must be >= 2");
  return static_cast<std::size_t>(
      64 - std::countl_zero(x - 1));
}

gf2::Poly draw_bits(SplitMix64& rng, std::size_t nbits) {
  std::vector<std::uint64_t> words((nbits + 63) / 64);
  for (auto& w : words) w = rng.next_u64();
  if (nbits % 64 != 0) words.back() &= (std::uint64_t(1) << (nbits % 64)) - 1;
  return gf2::Poly(std::move(words));
}

}  // namespace

BinaryField::BinaryField(std::size_t v)
    : v_(v), modulus_(gf2::smallest_irreducible(v)) {
  if (v == 0) throw std::invalid_argument("BinaryField: v must be positive");
}

AffineHashFamily::AffineHashFamily(BinaryField field, std::size_t u)
    : field_(std::move(field)), u_(u) {
  if (u_ == 0 || u_ > field_.v())
    throw std::invalid_argument("hash family: need 1 <= u <= v");
}

AffineHashFamily AffineHashFamily::for_set_size(std::uint64_t p_size,
                                                std::size_t u) {
  if (u >= 64 || (std::uint64_t(1) << u) > p_size)
    throw std::invalid_argument("hash family: need 2^u <= p_size");
  return AffineHashFamily(BinaryField(ceil_log2_u64(p_size)), u);
}

AffineHashFamily AffineHashFamily::for_outputs(int n, std::size_t N,
                                               std::size_t u) {
  if (n < 2) throw std::invalid_argument("hash family: alphabet size >= 2");
  if (N == 0) throw std::invalid_argument("hash family: need N >= 1");
  // 2^u <= n^N iff u <= bit_length(n^N) - 1.
  gf2::BigUint p(1);
  for (std::size_t i = 0; i < N; ++i)
    p.mul_add_small(static_cast<std::uint64_t>(n), 0);
  if (u + 1 > p.bit_length())
    throw std::invalid_argument("hash family: need 2^u <= n^N");
  return AffineHashFamily(shared_field(field_degree_for_outputs(n, N)), u);
}

std::size_t field_degree_for_outputs(int n, std::size_t N) {
  if (n < 2 || N == 0)
    throw std::invalid_argument("field_degree_for_outputs: bad parameters");
  // v = ceil(log2 n^N): bit_length - 1 for exact powers of two, else
  // bit_length.
  gf2::BigUint p(1);
  for (std::size_t i = 0; i < N; ++i)
    p.mul_add_small(static_cast<std::uint64_t>(n), 0);
  const std::size_t bl = p.bit_length();
  return p.to_poly().weight() == 1 ? bl - 1 : bl;
}

const BinaryField& shared_field(std::size_t v) {
  static std::mutex mutex;
  static std::map<std::size_t, BinaryField> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(v);
  if (it == cache.end()) it = cache.emplace(v, BinaryField(v)).first;
  return it->second;
}

AffineHashFamily::Index AffineHashFamily::sample_index(SplitMix64& rng) const {
  Index idx;
  idx.a = draw_bits(rng, field_.v());
  idx.b = draw_bits(rng, field_.v());
  return idx;
}

gf2::Poly AffineHashFamily::apply(const Index& index,
                                  const gf2::Poly& p) const {
  if (p.degree() >= static_cast<long>(field_.v()))
    throw std::invalid_argument("hash input exceeds v bits");
  return (field_.mul(index.a, p) ^ index.b).truncated(u_);
}

gf2::Poly encode_outputs(std::span<const int> s, int n) {
  if (n < 2) throw std::invalid_argument("encode_outputs: alphabet size >= 2");
  gf2::BigUint acc;
  for (int digit : s) {
    if (digit < 0 || digit >= n)
      throw std::invalid_argument("encode_outputs: digit out of range");
    acc.mul_add_small(static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(digit));
  }
  return acc.to_poly();
}

double verify_two_universality(const AffineHashFamily& fam,
                               std::uint64_t p_size) {
  const std::size_t v = fam.v();
  if (v >= 32) throw std::invalid_argument("two-universality check: v >= 32");
  const long double family = std::pow(4.0L, static_cast<long double>(v));
  if (static_cast<long double>(p_size) * p_size * family > 1e9L)
    throw std::invalid_argument("two-universality check: budget exceeded");
  const std::uint64_t a_count = std::uint64_t(1) << v;
  const std::uint64_t u_mask = (std::uint64_t(1) << fam.u()) - 1;
  // F(p) == F(p') iff low_u(a*(p xor p')) == 0; b cancels. Pairs sharing
  // p xor p' share the collision count, so counts are memoized by it.
  std::map<std::uint64_t, std::uint64_t> count_by_diff;
  double max_prob = 0.0;
  for (std::uint64_t p = 0; p < p_size; ++p) {
    for (std::uint64_t q = p + 1; q < p_size; ++q) {
      const std::uint64_t d = p ^ q;
      auto it = count_by_diff.find(d);
      if (it == count_by_diff.end()) {
        std::uint64_t cnt = 0;
        const gf2::Poly dp{d};
        for (std::uint64_t a = 0; a < a_count; ++a) {
          const gf2::Poly prod = fam.field().mul(gf2::Poly{a}, dp);
          if ((prod.low_u64() & u_mask) == 0) ++cnt;
        }
        it = count_by_diff.emplace(d, cnt).first;
      }
      max_prob = std::max(
          max_prob, static_cast<double>(it->second) / static_cast<double>(a_count));
    }
  }
  return max_prob;
}

bool verify_pair_uniformity(const AffineHashFamily& fam,
                            std::uint64_t p_size) {
  const std::size_t v = fam.v();
  if (v > 4)
    throw std::invalid_argument("pair-uniformity check: intended for v <= 4");
  const std::uint64_t side = std::uint64_t(1) << v;
  const std::uint64_t r_size = std::uint64_t(1) << fam.u();
  const std::uint64_t expected = (side * side) / (r_size * r_size);
  for (std::uint64_t p = 0; p < p_size; ++p) {
    for (std::uint64_t q = p + 1; q < p_size; ++q) {
      std::vector<std::uint64_t> joint(r_size * r_size, 0);
      for (std::uint64_t a = 0; a < side; ++a) {
        for (std::uint64_t b = 0; b < side; ++b) {
          const AffineHashFamily::Index idx{gf2::Poly{a}, gf2::Poly{b}};
          const std::uint64_t fp = fam.apply(idx, gf2::Poly{p}).low_u64();
          const std::uint64_t fq = fam.apply(idx, gf2::Poly{q}).low_u64();
          ++joint[fp * r_size + fq];
        }
      }
      for (auto c : joint)
        if (c != expected) return false;
    }
  }
  return true;
}

}  // namespace bellrand
