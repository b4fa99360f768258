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

#include "rbmeasure/numerics.hpp"

#include <cctype>
#include <utility>

namespace rbm {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) {
  if (q_.get_den() == 0) throw PreconditionError("rational with zero denominator");
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' ||
      den[0] == '+') {
    throw PreconditionError("malformed rational \"" + std::string(text) + "\"");
  }
  mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw PreconditionError("rational with zero denominator");
  return Rational(mpq_class(n, d));
}

Rational Rational::pow2(long exponent) {
  mpz_class p;
  if (exponent >= 0) {
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(exponent));
    return Rational(p);
  }
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-exponent));
  return Rational(mpq_class(mpz_class(1), p));
}

std::string Rational::to_string() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

mpz_class Rational::floor_scaled(unsigned bits) const {
  mpz_class num = q_.get_num();
  mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), bits);
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), q_.get_den_mpz_t());
  return out;
}

long Rational::ceil_log2() const {
  if (sign() <= 0) throw PreconditionError("ceil_log2 of a nonpositive rational");
  // Start from the bit-length estimate and correct by at most a couple of steps.
  long k = static_cast<long>(mpz_sizeinbase(q_.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q_.get_den_mpz_t(), 2));
  while (*this > pow2(k)) ++k;
  while (*this <= pow2(k - 1)) --k;
  return k;
}

Rational& Rational::operator+=(const Rational& o) {
  q_ += o.q_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  q_ -= o.q_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  q_ *= o.q_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw PreconditionError("division by zero");
  q_ /= o.q_;
  return *this;
}

Rational abs(const Rational& x) { return x.is_negative() ? -x : x; }

const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational sub_clamped(const Rational& a, const Rational& b) {
  if (b >= a) return Rational(0);
  return a - b;
}

Rational sub_guarded(const Rational& a, const Rational& b, const Rational& guard) {
  Rational diff = a - b;
  if (!diff.is_negative()) return diff;
  if (-diff > guard) {
    throw EvaluationError("guarded subtraction went negative: " + a.to_string() + " - " +
                          b.to_string());
  }
  return Rational(0);
}

Rational DyadicApprox::value() const {
  return Rational(mantissa) * Rational::pow2(-static_cast<long>(precision_bits));
}

std::string DyadicApprox::to_string() const {
  return mantissa.get_str() + "*2^-" + std::to_string(precision_bits);
}

DyadicApprox dyadic_approx(const Rational& x, unsigned r) {
  if (x.is_negative()) throw PreconditionError("dyadic_approx of a negative value");
  return DyadicApprox{x.floor_scaled(r), r};
}

DyadicApprox round_to_dyadic(const Rational& q, unsigned r) {
  // nearest: floor(q * 2^r + 1/2)
  const Rational shifted = q * Rational::pow2(static_cast<long>(r)) + Rational(1, 2);
  return DyadicApprox{shifted.floor_scaled(0), r};
}

}  // namespace rbm
