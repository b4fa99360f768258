// Copyright 2026 The rbmeasure Authors
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

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rbm {

/// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an evaluation cannot deliver the promised value or bound
/// (exhausted truncation, modulus breach, inexact input to an exact-only
/// construction).
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact rational number, always in lowest terms with a positive denominator.
///
/// Signed: intermediate quantities (Robin Hood arguments, residuals) may be
/// negative. Measures and martingale values reject negatives at their own
/// boundaries.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class q);
  explicit Rational(const mpz_class& integer) : q_(integer) {}

  /// Parses "p/q" or "p" (optionally signed). Throws PreconditionError.
  static Rational parse(std::string_view text);

  /// 2^exponent for any integer exponent.
  static Rational pow2(long exponent);

  const mpq_class& raw() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_negative() const { return sign() < 0; }

  /// Lowest-terms "p/q"; the denominator is omitted when it is 1.
  std::string to_string() const;

  /// floor(this * 2^bits)
  mpz_class floor_scaled(unsigned bits) const;

  /// Smallest integer k with this <= 2^k. Requires this > 0.
  long ceil_log2() const;

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.q_, b.q_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  mpq_class q_;
};

Rational abs(const Rational& x);
const Rational& min(const Rational& a, const Rational& b);
const Rational& max(const Rational& a, const Rational& b);

/// max(a - b, 0).
Rational sub_clamped(const Rational& a, const Rational& b);

/// a - b, where b may exceed a by at most `guard`; the result is clamped to 0
/// in that window. A larger overshoot throws EvaluationError: it means a
/// quantity proved nonnegative came out negative.
Rational sub_guarded(const Rational& a, const Rational& b,
                     const Rational& guard = Rational(0));

/// A dyadic rational mantissa * 2^-precision_bits standing in for some target
/// value with |value - target| < 2^-precision_bits.
struct DyadicApprox {
  mpz_class mantissa;
  unsigned precision_bits = 0;

  Rational value() const;
  /// Error bound 2^-precision_bits.
  Rational error_bound() const { return Rational::pow2(-static_cast<long>(precision_bits)); }
  /// "m*2^-r"
  std::string to_string() const;

  friend bool operator==(const DyadicApprox& a, const DyadicApprox& b) {
    return a.precision_bits == b.precision_bits && a.mantissa == b.mantissa;
  }
};

/// Canonical approximation of x >= 0 at precision r: mantissa floor(x * 2^r),
/// so 0 <= x - value < 2^-r.
DyadicApprox dyadic_approx(const Rational& x, unsigned r);

/// Rounds an approximation q of some target (|q - target| < 2^-(r+2)) to the
/// nearest multiple of 2^-r. The result is within 2^-r of the target.
DyadicApprox round_to_dyadic(const Rational& q, unsigned r);

}  // namespace rbm
