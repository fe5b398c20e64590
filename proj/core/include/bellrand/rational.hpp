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

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bellrand {

/// Exact rational with 64-bit numerator/denominator. Game score tables are
/// kept rational so that brute-force classical values come out exact; all
/// intermediate sums in those enumerations stay far below the overflow
/// guard, which throws rather than wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    normalize();
  }
  // NOLINTNEXTLINE(google-explicit-constructor): integers are exact rationals.
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}

  /// Exact conversion from a finite double (every double is p * 2^e).
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("Rational: non-finite");
    if (x == 0.0) return Rational();
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
    // 53 mantissa bits; scale until integral.
    std::int64_t num = 0;
    int shift = 0;
    for (; shift <= 53; ++shift) {
      const double scaled = std::ldexp(m, shift);
      if (scaled == std::floor(scaled)) {
        num = static_cast<std::int64_t>(scaled);
        break;
      }
    }
    const int pow2 = e - shift;
    if (pow2 >= 0) {
      if (pow2 > 62) throw std::overflow_error("Rational: double too large");
      return Rational(mul_checked(num, std::int64_t(1) << pow2), 1);
    }
    if (pow2 < -62) throw std::overflow_error("Rational: double too small");
    return Rational(num, std::int64_t(1) << (-pow2));
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  bool is_zero() const { return num_ == 0; }

  Rational operator-() const { return raw(-num_, den_); }
  Rational operator+(const Rational& o) const {
    const std::int64_t g = std::gcd(den_, o.den_);
    const std::int64_t l = mul_checked(den_ / g, o.den_);
    return Rational(add_checked(mul_checked(num_, o.den_ / g),
                                mul_checked(o.num_, den_ / g)),
                    l);
  }
  Rational operator-(const Rational& o) const { return *this + (-o); }
  Rational operator*(const Rational& o) const {
    const std::int64_t g1 = std::gcd(std::abs(num_), o.den_);
    const std::int64_t g2 = std::gcd(std::abs(o.num_), den_);
    return raw(mul_checked(num_ / g1, o.num_ / g2),
               mul_checked(den_ / g2, o.den_ / g1));
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  std::strong_ordering operator<=>(const Rational& o) const {
    // den > 0 always, so cross-multiplication preserves order.
    const auto lhs = static_cast<__int128>(num_) * o.den_;
    const auto rhs = static_cast<__int128>(o.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "p/q" or "p".
  static Rational parse(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s), 1);
    return Rational(std::stoll(s.substr(0, slash)),
                    std::stoll(s.substr(slash + 1)));
  }

 private:
  static Rational raw(std::int64_t n, std::int64_t d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }
  static std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
    const __int128 p = static_cast<__int128>(a) * b;
    if (p > INT64_MAX || p < INT64_MIN)
      throw std::overflow_error("Rational: overflow");
    return static_cast<std::int64_t>(p);
  }
  static std::int64_t add_checked(std::int64_t a, std::int64_t b) {
    const __int128 s = static_cast<__int128>(a) + b;
    if (s > INT64_MAX || s < INT64_MIN)
      throw std::overflow_error("Rational: overflow");
    return static_cast<std::int64_t>(s);
  }
  void normalize() {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(std::abs(num_), den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace bellrand
