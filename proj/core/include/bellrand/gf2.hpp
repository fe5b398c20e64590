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
#include <string>
#include <vector>

namespace bellrand::gf2 {

/// Polynomial over GF(2). Bit i of the little-endian word array is the
/// coefficient of X^i. Degrees are only bounded by memory; the arithmetic is
/// plain shift-XOR schoolbook, which the golden-file tests pin bit-exactly.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::uint64_t bits) : words_{bits} { trim(); }
  explicit Poly(std::vector<std::uint64_t> words) : words_(std::move(words)) {
    trim();
  }

  static Poly monomial(std::size_t degree);

  /// Degree of the polynomial; -1 for the zero polynomial.
  long degree() const;
  bool is_zero() const { return words_.empty(); }
  bool bit(std::size_t i) const {
    const std::size_t w = i / 64;
    return w < words_.size() && ((words_[w] >> (i % 64)) & 1u);
  }
  void set_bit(std::size_t i);
  std::size_t weight() const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::uint64_t low_u64() const { return words_.empty() ? 0 : words_[0]; }

  Poly operator^(const Poly& o) const;
  Poly& operator^=(const Poly& o);
  Poly shifted_left(std::size_t k) const;
  Poly shifted_right(std::size_t k) const;
  /// Keeps only the k lowest-order coefficients.
  Poly truncated(std::size_t k) const;

  bool operator==(const Poly& o) const { return words_ == o.words_; }

  /// Big-endian hex (no prefix); "0" for the zero polynomial.
  std::string to_hex() const;
  static Poly from_hex(const std::string& hex);

 private:
  void trim();
  std::vector<std::uint64_t> words_;  // little-endian, no trailing zero words
};

/// Carry-less product.
Poly clmul(const Poly& a, const Poly& b);
/// Carry-less square (bit spreading).
Poly clsquare(const Poly& a);
/// Remainder of a modulo m (generic long division).
Poly poly_mod(Poly a, const Poly& m);
Poly poly_gcd(Poly a, Poly b);

/// Preprocessed modulus. When every non-leading coefficient sits in the low
/// 64 bits (true for all pinned moduli) reduction folds whole words through
/// the congruence X^d = tail, which is what makes Rabin tests at degree ~10^4
/// affordable.
class Modulus {
 public:
  explicit Modulus(Poly m);
  const Poly& poly() const { return poly_; }
  long degree() const { return degree_; }
  Poly reduce(Poly a) const;
  Poly mulmod(const Poly& a, const Poly& b) const;
  Poly sqrmod(const Poly& a) const;

 private:
  Poly poly_;
  long degree_ = 0;
  bool sparse_ = false;
  Poly tail_;  // poly_ minus its leading term
};

/// Deterministic irreducibility test. For degree <= 64 this is an exhaustive
/// sweep over all possible factor degrees; above that it is the Rabin
/// criterion (equivalent, but only touches the prime divisors of the degree).
bool is_irreducible(const Poly& f);

/// The lexicographically smallest irreducible polynomial of the given degree
/// (smallest integer encoding with the leading bit set). Degrees 1..64 come
/// from a pinned table, verified at lookup; larger degrees run a deterministic
/// search with a small-factor screen.
Poly smallest_irreducible(std::size_t degree);

/// Search used to build and audit the pinned table (no table lookup).
Poly search_smallest_irreducible(std::size_t degree);

/// Unsigned big integer on the same word layout; just enough arithmetic for
/// base-n output encoding (multiply by a small word and add a small word).
class BigUint {
 public:
  BigUint() = default;
  explicit BigUint(std::uint64_t v) : words_{v} { trim(); }

  void mul_add_small(std::uint64_t mul, std::uint64_t add);
  std::size_t bit_length() const;
  bool fits_u64() const { return words_.size() <= 1; }
  std::uint64_t low_u64() const { return words_.empty() ? 0 : words_[0]; }

  /// Reinterprets the binary representation as a GF(2) polynomial.
  Poly to_poly() const { return Poly(words_); }

 private:
  void trim();
  std::vector<std::uint64_t> words_;
};

}  // namespace bellrand::gf2
