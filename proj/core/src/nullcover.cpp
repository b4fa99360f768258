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

#include "rbmeasure/nullcover.hpp"

#include <utility>

#include "rbmeasure/regularity.hpp"

namespace rbm {

namespace {

Rational upper_bound(const Martingale& m, const BitString& w, unsigned r) {
  if (m.exact()) return m.value(w);
  return m.approximate(w, r + 4) + Rational::pow2(-static_cast<long>(r + 4));
}

unsigned ceil_log2_count(std::size_t k) {
  unsigned bits = 0;
  while ((std::size_t{1} << bits) < k) ++bits;
  return bits;
}

// sum_{r >= from} nu(0^{r+1} | w) for a product measure.
std::optional<Rational> z3_tail(const ProbMeasure& nu, const BitString& w, unsigned from) {
  if (!nu.is_product() || nu.is_null(w)) return std::nullopt;
  std::size_t first_one = w.size();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 1) {
      first_one = i;
      break;
    }
  }
  if (first_one < w.size()) {
    // d_r(w) = 1 exactly when 0^{r+1} is a prefix of w.
    return Rational(first_one > from ? static_cast<long>(first_one - from) : 0L);
  }
  const std::size_t n = w.size();
  Rational total(n > from ? static_cast<long>(n - from) : 0L);
  const std::size_t start = std::max<std::size_t>(n, from);
  // P = nu(0^start | 0^n); each further term multiplies by the next zero-odds.
  Rational p(1);
  for (std::size_t k = n; k < start; ++k) p *= Rational(1) - nu.bias(k);
  const std::size_t listed = nu.kind() == MeasureKind::kCoinToss ? nu.biases().size() : 0;
  std::size_t k = start;
  for (; k < listed; ++k) {
    p *= Rational(1) - nu.bias(k);
    total += p;
  }
  if (p.is_zero()) return total;
  const Rational q = Rational(1) - nu.bias(k);
  if (q == Rational(1)) return std::nullopt;
  return total + p * q / (Rational(1) - q);
}

class CoverSumNode final : public MartingaleNode {
 public:
  explicit CoverSumNode(NullCover cover) : cover_(std::move(cover)) {
    if (!cover_.regular) throw PreconditionError("null_cover_to_strong needs a regular cover");
  }

  bool exact() const override { return static_cast<bool>(cover_.tail); }

  Rational value(const BitString& w) const override {
    if (cover_.nu.is_null(w)) return Rational(static_cast<long>(w.size()));
    if (!cover_.tail) throw EvaluationError("cover " + cover_.name + " has no closed-form tail");
    return memo_.get_or_compute(w, [&] { return exact_sum(w); });
  }

  Rational exact_sum(const BitString& w) const {
    const unsigned cut = static_cast<unsigned>(w.size());
    const std::optional<Rational> tail = cover_.tail(w, cut);
    if (!tail) throw EvaluationError("cover tail unavailable at " + w.display());
    Rational total = *tail;
    for (unsigned r = 0; r < cut; ++r) total += cover_.member(r).value(w);
    return total;
  }

  Rational approximate(const BitString& w, unsigned t) const override {
    if (exact()) return value(w);
    if (cover_.nu.is_null(w)) return Rational(static_cast<long>(w.size()));
    // The dropped tail is at most 2^-R / nu(w) <= 2^-(t+1).
    const unsigned big_r =
        t + static_cast<unsigned>(cover_.nu.positivity_bits(w.size())) + 1;
    const unsigned member_bits = t + 2 + ceil_log2_count(big_r + 1);
    Rational total(0);
    for (unsigned r = 0; r <= big_r; ++r) {
      const Martingale m = cover_.member(r);
      total += m.exact() ? m.value(w) : m.approximate(w, member_bits);
    }
    return total;
  }

  std::string describe() const override { return "null_cover_sum(" + cover_.name + ")"; }

 private:
  NullCover cover_;
  MemoTable<Rational> memo_;
};

}  // namespace

NullCover z3_cover(const ProbMeasure& nu) {
  NullCover cover;
  cover.name = "z3";
  cover.nu = nu;
  cover.member = [nu](unsigned r) { return z3_ladder(r, nu); };
  cover.regular = true;
  if (nu.is_product()) {
    cover.tail = [nu](const BitString& w, unsigned from) { return z3_tail(nu, w, from); };
  }
  return cover;
}

NullCover regularize_cover(const NullCover& cover) {
  NullCover out;
  out.name = "regularized(" + cover.name + ")";
  out.nu = cover.nu;
  out.member = [member = cover.member, nu = cover.nu](unsigned r) {
    return regularize(member(r), nu);
  };
  out.regular = true;
  return out;
}

std::optional<unsigned> check_null_cover(const NullCover& cover, unsigned max_r) {
  for (unsigned r = 0; r <= max_r; ++r) {
    if (upper_bound(cover.member(r), BitString(), r) > Rational::pow2(-static_cast<long>(r))) {
      return r;
    }
  }
  return std::nullopt;
}

Martingale null_cover_to_strong(const NullCover& cover) {
  return Martingale(std::make_shared<CoverSumNode>(cover));
}

Martingale null_cover_truncation(const NullCover& cover, unsigned big_r) {
  std::vector<Martingale> terms;
  for (unsigned r = 0; r <= big_r; ++r) terms.push_back(cover.member(r));
  return sum(std::move(terms));
}

SplittingOp success_to_measurement(const Martingale& d, const ProbMeasure& nu) {
  if (!d.exact()) throw PreconditionError("success_to_measurement needs an exact martingale");
  const Rational denominator = Rational(1) + d.value(BitString());
  return SplittingOp(
      "success(" + d.describe() + ")", nu,
      [d, denominator](unsigned r, const Martingale& d_prime) {
        const Rational c = Rational::pow2(-static_cast<long>(r)) / denominator;
        return SplitPair{scale(c, d), d_prime};
      });
}

NullCover measurement_to_nullcover(const SplittingOp& op, unsigned eager_check_bits) {
  auto member = [op](unsigned r) {
    Martingale m = op.apply(r, unit()).plus;
    if (upper_bound(m, BitString(), r) > Rational::pow2(-static_cast<long>(r))) {
      throw EvaluationError("estimate of " + op.provenance() + " at r=" + std::to_string(r) +
                            " exceeds 2^-r");
    }
    return m;
  };
  for (unsigned r = 0; r <= eager_check_bits; ++r) {
    try {
      member(r);
    } catch (const EvaluationError& e) {
      throw PreconditionError(e.what());
    }
  }
  NullCover cover;
  cover.name = "nullcover(" + op.provenance() + ")";
  cover.nu = op.measure();
  cover.member = member;
  return cover;
}

Bicover bicover_from_measurement(const SplittingOp& op) {
  Bicover b;
  b.name = "bicover(" + op.provenance() + ")";
  b.plus = [op](unsigned r) { return op.apply(r, unit()).plus; };
  b.minus = [op](unsigned r) { return op.apply(r, unit()).minus; };
  return b;
}

std::optional<unsigned> check_bicover(const Bicover& bicover, unsigned max_r) {
  for (unsigned r = 0; r <= max_r; ++r) {
    const Rational total =
        upper_bound(bicover.plus(r), BitString(), r) + upper_bound(bicover.minus(r), BitString(), r);
    if (total > Rational(1) + Rational::pow2(-static_cast<long>(r))) return r;
  }
  return std::nullopt;
}

}  // namespace rbm
