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

#include "bellrand/gf2.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>

namespace bellrand::gf2 {

namespace {

// res ^= a << k, with res sized in advance.
void xor_shifted(std::vector<std::uint64_t>& res, const Poly& a,
                 std::size_t k) {
  const auto& aw = a.words();
  const std::size_t off = k / 64;
  const unsigned sh = static_cast<unsigned>(k % 64);
  if (sh == 0) {
    for (std::size_t i = 0; i < aw.size(); ++i) res[off + i] ^= aw[i];
    return;
  }
  for (std::size_t i = 0; i < aw.size(); ++i) {
    res[off + i] ^= aw[i] << sh;
    res[off + i + 1] ^= aw[i] >> (64 - sh);
  }
}

// 16-bit -> 32-bit bit spreading table for squaring.
const std::array<std::uint32_t, 65536>& spread_table() {
  static const auto table = [] {
    auto t = std::array<std::uint32_t, 65536>{};
    for (std::uint32_t x = 0; x < 65536; ++x) {
      std::uint32_t r = 0;
      for (unsigned b = 0; b < 16; ++b)
        if ((x >> b) & 1u) r |= 1u << (2 * b);
      t[x] = r;
    }
    return t;
  }();
  return table;
}

}  // namespace

Poly Poly::monomial(std::size_t degree) {
  Poly p;
  p.set_bit(degree);
  return p;
}

long Poly::degree() const {
  if (words_.empty()) return -1;
  const std::uint64_t top = words_.back();
  return static_cast<long>(64 * (words_.size() - 1) + 63 -
                           static_cast<unsigned>(std::countl_zero(top)));
}

void Poly::set_bit(std::size_t i) {
  const std::size_t w = i / 64;
  if (w >= words_.size()) words_.resize(w + 1, 0);
  words_[w] |= std::uint64_t(1) << (i % 64);
}

std::size_t Poly::weight() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

Poly Poly::operator^(const Poly& o) const {
  Poly r = *this;
  r ^= o;
  return r;
}

Poly& Poly::operator^=(const Poly& o) {
  if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
  for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] ^= o.words_[i];
  trim();
  return *this;
}

Poly Poly::shifted_left(std::size_t k) const {
  if (words_.empty()) return {};
  std::vector<std::uint64_t> r(words_.size() + k / 64 + 1, 0);
  xor_shifted(r, *this, k);
  return Poly(std::move(r));
}

Poly Poly::shifted_right(std::size_t k) const {
  const std::size_t drop = k / 64;
  if (drop >= words_.size()) return {};
  const unsigned sh = static_cast<unsigned>(k % 64);
  std::vector<std::uint64_t> r(words_.size() - drop, 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = words_[i + drop] >> sh;
    if (sh != 0 && i + drop + 1 < words_.size())
      r[i] |= words_[i + drop + 1] << (64 - sh);
  }
  return Poly(std::move(r));
}

Poly Poly::truncated(std::size_t k) const {
  std::vector<std::uint64_t> r(words_.begin(),
                               words_.begin() + std::min(words_.size(),
                                                         (k + 63) / 64));
  if (!r.empty() && k % 64 != 0 && r.size() == (k + 63) / 64)
    r.back() &= (std::uint64_t(1) << (k % 64)) - 1;
  return Poly(std::move(r));
}

std::string Poly::to_hex() const {
  if (words_.empty()) return "0";
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (std::size_t i = words_.size(); i-- > 0;) {
    for (int nib = 15; nib >= 0; --nib) {
      const unsigned d = (words_[i] >> (4 * nib)) & 0xf;
      if (s.empty() && d == 0) continue;
      s.push_back(digits[d]);
    }
  }
  return s.empty() ? "0" : s;
}

Poly Poly::from_hex(const std::string& hex) {
  Poly p;
  std::size_t bitpos = 0;
  for (std::size_t i = hex.size(); i-- > 0;) {
    const char c = hex[i];
    unsigned d = 0;
    if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') d = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') d = static_cast<unsigned>(c - 'A' + 10);
    else throw std::invalid_argument("gf2::Poly: bad hex digit");
    for (unsigned b = 0; b < 4; ++b)
      if ((d >> b) & 1u) p.set_bit(bitpos + b);
    bitpos += 4;
  }
  return p;
}

void Poly::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

Poly clmul(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  // Iterate set bits of the lighter operand.
  const Poly& big = (a.words().size() >= b.words().size()) ? a : b;
  const Poly& small = (a.words().size() >= b.words().size()) ? b : a;
  std::vector<std::uint64_t> r(big.words().size() + small.words().size() + 1,
                               0);
  const auto& sw = small.words();
  for (std::size_t wi = 0; wi < sw.size(); ++wi) {
    std::uint64_t w = sw[wi];
    while (w != 0) {
      const unsigned b0 = static_cast<unsigned>(std::countr_zero(w));
      w &= w - 1;
      xor_shifted(r, big, 64 * wi + b0);
    }
  }
  return Poly(std::move(r));
}

Poly clsquare(const Poly& a) {
  const auto& t = spread_table();
  std::vector<std::uint64_t> r(2 * a.words().size(), 0);
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    const std::uint64_t w = a.words()[i];
    r[2 * i] = static_cast<std::uint64_t>(t[w & 0xffff]) |
               (static_cast<std::uint64_t>(t[(w >> 16) & 0xffff]) << 32);
    r[2 * i + 1] = static_cast<std::uint64_t>(t[(w >> 32) & 0xffff]) |
                   (static_cast<std::uint64_t>(t[(w >> 48) & 0xffff]) << 32);
  }
  return Poly(std::move(r));
}

Poly poly_mod(Poly a, const Poly& m) {
  if (m.is_zero()) throw std::invalid_argument("gf2::poly_mod: zero modulus");
  const long dm = m.degree();
  long da = a.degree();
  while (da >= dm) {
    a ^= m.shifted_left(static_cast<std::size_t>(da - dm));
    da = a.degree();
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = poly_mod(std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Modulus::Modulus(Poly m) : poly_(std::move(m)) {
  degree_ = poly_.degree();
  if (degree_ < 1) throw std::invalid_argument("gf2::Modulus: degree < 1");
  tail_ = poly_;
  // Clear the leading bit.
  tail_ ^= Poly::monomial(static_cast<std::size_t>(degree_));
  sparse_ = tail_.degree() < 64;
}

Poly Modulus::reduce(Poly a) const {
  if (!sparse_) return poly_mod(std::move(a), poly_);
  const auto d = static_cast<std::size_t>(degree_);
  while (a.degree() >= degree_) {
    Poly high = a.shifted_right(d);
    a = a.truncated(d);
    a ^= clmul(high, tail_);
  }
  return a;
}

Poly Modulus::mulmod(const Poly& a, const Poly& b) const {
  return reduce(clmul(a, b));
}

Poly Modulus::sqrmod(const Poly& a) const { return reduce(clsquare(a)); }

namespace {

// Irreducibles of degree 2..13 as bitmasks, for screening large candidates.
const std::vector<std::uint32_t>& small_irreducibles() {
  static const auto list = [] {
    std::vector<std::uint32_t> out;
    for (std::uint32_t f = 4; f < (1u << 14); ++f)
      if (is_irreducible(Poly(f))) out.push_back(f);
    return out;
  }();
  return list;
}

unsigned deg_u32(std::uint32_t x) {
  return 31u - static_cast<unsigned>(std::countl_zero(x));
}

// Remainder of a 64-bit polynomial by a small one.
std::uint64_t mod_small(std::uint64_t a, std::uint32_t g) {
  const unsigned dg = deg_u32(g);
  while (a >> dg != 0) {
    const unsigned da =
        63u - static_cast<unsigned>(std::countl_zero(a));
    a ^= static_cast<std::uint64_t>(g) << (da - dg);
  }
  return a;
}

// Carry-less product of two sub-32-bit operands.
std::uint64_t clmul_small(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  while (b != 0) {
    const unsigned k = static_cast<unsigned>(std::countr_zero(b));
    b &= b - 1;
    r ^= a << k;
  }
  return r;
}

// X^e mod g for a small modulus g.
std::uint64_t x_pow_mod_small(std::uint64_t e, std::uint32_t g) {
  std::uint64_t result = 1;
  std::uint64_t base = mod_small(2, g);  // X mod g
  while (e != 0) {
    if (e & 1) result = mod_small(clmul_small(result, base), g);
    base = mod_small(clmul_small(base, base), g);
    e >>= 1;
  }
  return result;
}

std::vector<std::size_t> prime_divisors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Pinned lexicographically smallest irreducible moduli, stored as the tail
// below the leading X^v term. Entry v=1 is the polynomial X itself.
// Audited by search_smallest_irreducible in the test suite.
constexpr std::array<std::uint64_t, 65> kSmallestIrreducibleTail = {
    0,  // unused (degree 0)
    0x0, 0x3, 0x3, 0x3, 0x5, 0x3, 0x3, 0x1b, 0x3, 0x9,
    0x5, 0x9, 0x1b, 0x21, 0x3, 0x2b, 0x9, 0x9, 0x27, 0x9,
    0x5, 0x3, 0x21, 0x1b, 0x9, 0x1b, 0x27, 0x3, 0x5, 0x3,
    0x9, 0x8d, 0x4b, 0x1b, 0x5, 0x35, 0x3f, 0x63, 0x11, 0x39,
    0x9, 0x27, 0x59, 0x21, 0x1b, 0x3, 0x21, 0x2d, 0x71, 0x1d,
    0x4b, 0x9, 0x47, 0x7d, 0x47, 0x95, 0x11, 0x63, 0x7b, 0x3,
    0x27, 0x69, 0x3, 0x1b};

}  // namespace

bool is_irreducible(const Poly& f) {
  const long d = f.degree();
  if (d < 1) return false;
  if (d == 1) return true;  // X and X+1
  if (!f.bit(0)) return false;        // divisible by X
  if (f.weight() % 2 == 0) return false;  // divisible by X+1
  const Modulus m(f);
  const Poly x = Poly::monomial(1);
  Poly h = x;  // X^(2^k) mod f, starting at k = 0
  if (d <= 64) {
    // f is reducible iff it has an irreducible factor of degree <= d/2;
    // gcd with X^(2^k) - X detects factors of any degree dividing k.
    for (long k = 1; k <= d / 2; ++k) {
      h = m.sqrmod(h);
      if (poly_gcd(h ^ x, f).degree() > 0) return false;
    }
    return true;
  }
  // Rabin: X^(2^d) = X mod f, and X^(2^(d/p)) - X coprime to f for all
  // prime divisors p of d.
  auto checkpoints = prime_divisors(static_cast<std::size_t>(d));
  std::vector<std::size_t> ks;
  ks.reserve(checkpoints.size());
  for (auto p : checkpoints) ks.push_back(static_cast<std::size_t>(d) / p);
  std::sort(ks.begin(), ks.end());
  std::size_t k = 0;
  for (auto kc : ks) {
    for (; k < kc; ++k) h = m.sqrmod(h);
    if (poly_gcd(h ^ x, f).degree() > 0) return false;
  }
  for (; k < static_cast<std::size_t>(d); ++k) h = m.sqrmod(h);
  return h == x;
}

Poly search_smallest_irreducible(std::size_t degree) {
  if (degree == 0)
    throw std::invalid_argument("gf2: no irreducible of degree 0");
  if (degree == 1) return Poly::monomial(1);  // X
  const Poly lead = Poly::monomial(degree);
  if (degree <= 64) {
    for (std::uint64_t tail = 1;; tail += 2) {
      if ((std::popcount(tail) & 1) != 0) continue;  // weight must be odd
      Poly f = lead ^ Poly(tail);
      if (is_irreducible(f)) return f;
    }
  }
  // Large degrees: screen candidates against all irreducible factors of
  // degree <= 13 using residues of X^degree, then run the full test.
  const auto& screen = small_irreducibles();
  std::vector<std::uint64_t> x_deg_mod(screen.size());
  for (std::size_t i = 0; i < screen.size(); ++i)
    x_deg_mod[i] = x_pow_mod_small(degree, screen[i]);
  for (std::uint64_t tail = 1;; tail += 2) {
    if ((std::popcount(tail) & 1) != 0) continue;
    bool smooth = false;
    for (std::size_t i = 0; i < screen.size(); ++i) {
      if ((x_deg_mod[i] ^ mod_small(tail, screen[i])) == 0) {
        smooth = true;
        break;
      }
    }
    if (smooth) continue;
    Poly f = lead ^ Poly(tail);
    if (is_irreducible(f)) return f;
  }
}

Poly smallest_irreducible(std::size_t degree) {
  if (degree == 0)
    throw std::invalid_argument("gf2: no irreducible of degree 0");
  if (degree <= 64) {
    Poly f = Poly::monomial(degree) ^ Poly(kSmallestIrreducibleTail[degree]);
    if (!is_irreducible(f))
      throw std::logic_error("gf2: pinned modulus failed verification");
    return f;
  }
  return search_smallest_irreducible(degree);
}

void BigUint::mul_add_small(std::uint64_t mul, std::uint64_t add) {
  unsigned __int128 carry = add;
  for (auto& w : words_) {
    const unsigned __int128 v = static_cast<unsigned __int128>(w) * mul + carry;
    w = static_cast<std::uint64_t>(v);
    carry = v >> 64;
  }
  while (carry != 0) {
    words_.push_back(static_cast<std::uint64_t>(carry));
    carry >>= 64;
  }
  trim();
}

std::size_t BigUint::bit_length() const {
  if (words_.empty()) return 0;
  return 64 * (words_.size() - 1) + 64 -
         static_cast<unsigned>(std::countl_zero(words_.back()));
}

void BigUint::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

}  // namespace bellrand::gf2
