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

#include <cstdint>
#include <span>
#include <vector>

#include "bellrand/gf2.hpp"
#include "bellrand/rng.hpp"

namespace bellrand {

/// The field F_{2^v}, represented as v-bit strings modulo the pinned
/// irreducible polynomial of degree v.
class BinaryField {
 public:
  explicit BinaryField(std::size_t v);

  std::size_t v() const { return v_; }
  const gf2::Poly& modulus() const { return modulus_.poly(); }

  gf2::Poly mul(const gf2::Poly& a, const gf2::Poly& b) const {
    return modulus_.mulmod(a, b);
  }
  static gf2::Poly add(const gf2::Poly& a, const gf2::Poly& b) {
    return a ^ b;
  }

 private:
  std::size_t v_;
  gf2::Modulus modulus_;
};

/// The family of maps p -> low_u(a*p + b) with (a, b) ranging over F_{2^v}^2:
/// affine endomorphisms composed with truncation to the low u bits. The
/// family has exactly 2^(2v) members and is 2-universal onto F_2^u.
class AffineHashFamily {
 public:
  struct Index {
    gf2::Poly a, b;
  };

  AffineHashFamily(BinaryField field, std::size_t u);

  /// Family for an input set of the given size; v = ceil(log2 p_size).
  static AffineHashFamily for_set_size(std::uint64_t p_size, std::size_t u);
  /// Family for the set of base-n output strings of length N (p_size = n^N).
  static AffineHashFamily for_outputs(int n, std::size_t N, std::size_t u);

  std::size_t u() const { return u_; }
  std::size_t v() const { return field_.v(); }
  const BinaryField& field() const { return field_; }
  /// log2 of the family size (= 2v).
  std::size_t log2_size() const { return 2 * field_.v(); }

  /// Draws (a, b) as 2v independent bits.
  Index sample_index(SplitMix64& rng) const;

  /// low_u(a*p + b), bit-exact. Throws if p does not fit in v bits.
  gf2::Poly apply(const Index& index, const gf2::Poly& p) const;

 private:
  BinaryField field_;
  std::size_t u_;
};

/// Base-n positional encoding of an output string into a field element;
/// s[0] is the most significant digit. Injective on digit strings.
gf2::Poly encode_outputs(std::span<const int> s, int n);

/// Field degree for hashing length-N base-n output strings:
/// v = ceil(log2 n^N), computed exactly.
std::size_t field_degree_for_outputs(int n, std::size_t N);

/// Process-wide cache of constructed fields. The modulus is deterministic,
/// so caching only saves the search time (noticeable at degree ~10^4).
const BinaryField& shared_field(std::size_t v);

/// Exhaustive 2-universality check: the maximum over distinct p != p' in
/// [0, p_size) of the probability, over a uniform family member, of a
/// collision. Must come out <= 2^-u. The offset b cancels from the collision
/// condition, so members are enumerated through their multiplier a; the
/// enumeration is still exhaustive over pairs.
double verify_two_universality(const AffineHashFamily& fam,
                               std::uint64_t p_size);

/// Full-family check (every (a, b) enumerated) that the joint distribution
/// of (F(p), F(p')) is exactly uniform on R x R for every distinct pair.
/// Intended for v <= 4.
bool verify_pair_uniformity(const AffineHashFamily& fam, std::uint64_t p_size);

}  // namespace bellrand
