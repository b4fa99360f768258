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

#include "rbmeasure/diagonal.hpp"

#include <utility>

namespace rbm {

namespace {

constexpr unsigned kBoundBits = 64;

// Exact value, or an upper bound from a high-precision approximation.
Rational upper_value(const Martingale& d, const BitString& w) {
  if (d.exact()) return d.value(w);
  return d.approximate(w, kBoundBits) + Rational::pow2(-static_cast<long>(kBoundBits));
}

// A floor-style dyadic approximation of d(x) at precision a.
DyadicApprox approx_at(const Martingale& d, const BitString& x, unsigned a) {
  if (d.exact()) return dyadic_approx(d.value(x), a);
  return d.evaluate(x, a).approx;
}

}  // namespace

ConstructorTrace conserve_constructor(const Martingale& d, const ProbMeasure& nu,
                                      const BitString& w, std::size_t steps) {
  ConstructorTrace trace;
  trace.w = w;
  const Rational d_lambda = upper_value(d, BitString());
  const Rational nu_w = nu.measure_of(w);
  if (!(d_lambda < nu_w)) {
    throw PreconditionError("diagonalize: need d(λ) < nu(w), have d(λ) = " +
                            d_lambda.to_string() + " and nu(" + w.display() +
                            ") = " + nu_w.to_string());
  }
  const Rational d_w = upper_value(d, w);
  const Rational one(1);
  if (d_w >= one) throw PreconditionError("diagonalize: d(w) >= 1, no m exists");
  unsigned m = 1;
  while (d_w > one - Rational::pow2(1 - static_cast<long>(m))) ++m;
  trace.m = m;
  trace.ceiling = one - Rational::pow2(-static_cast<long>(m));

  auto record = [&](const BitString& x) {
    TraceRow row;
    row.prefix = x;
    row.value = d.exact() ? d.value(x) : upper_value(d, x);
    row.extends_w = w.is_prefix_of(x);
    if (row.extends_w) {
      Rational bound = d_w;
      for (std::size_t i = 0; i < x.size() - w.size(); ++i) {
        bound += Rational::pow2(-static_cast<long>(i + m + 1));
      }
      if (row.value > bound || row.value > trace.ceiling) trace.bounds_hold = false;
      row.bound = std::move(bound);
    } else if (row.value >= one) {
      trace.bounds_hold = false;
    }
    trace.rows.push_back(std::move(row));
  };

  BitString x;
  record(x);
  for (std::size_t j = 0; j < steps; ++j) {
    if (x.size() < w.size() && x.is_prefix_of(w)) {
      x = w;
    } else {
      const unsigned a = static_cast<unsigned>(x.size()) + m + 2;
      const DyadicApprox lo = approx_at(d, x.child(0), a);
      const DyadicApprox hi = approx_at(d, x.child(1), a);
      x = x.child(lo.mantissa <= hi.mantissa ? 0 : 1);
    }
    record(x);
  }
  trace.prefix = x;
  return trace;
}

BitString find_light_leaf(const Martingale& d, std::size_t m,
                          const std::optional<ProbMeasure>& nu) {
  const Rational root = d.value(BitString());
  std::optional<BitString> found;
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t v = 0; v < count && !found; ++v) {
    const BitString u = BitString::from_value(v, m);
    if (nu && nu->is_null(u)) continue;
    if (d.value(u) <= root) found = u;
  }
  if (!found) {
    throw EvaluationError("no light leaf of length " + std::to_string(m) +
                          "; the input is not a martingale");
  }
  return *found;
}

namespace {

class ZeroOneNode final : public MartingaleNode {
 public:
  ZeroOneNode(Martingale d, std::size_t m, BitString u, std::vector<bool> heavy,
              std::vector<Rational> below, std::string name)
      : d_(std::move(d)),
        m_(m),
        u_(std::move(u)),
        heavy_(std::move(heavy)),
        below_(std::move(below)),
        name_(std::move(name)) {}

  bool exact() const override { return true; }

  Rational value(const BitString& w) const override {
    if (w.size() < m_) return below_[static_cast<std::size_t>(w.index())];
    const BitString root = w.prefix(m_);
    if (!heavy_[static_cast<std::size_t>(root.value())]) return d_.value(w);
    return d_.value(BitString(u_.to_string() + w.to_string().substr(m_)));
  }

  std::string describe() const override { return name_; }

 private:
  Martingale d_;
  std::size_t m_;
  BitString u_;
  std::vector<bool> heavy_;
  std::vector<Rational> below_;  // indexed by BitString::index(), |w| < m
  std::string name_;
};

}  // namespace

ZeroOneResult zero_one_transform(const Martingale& d, const ProbMeasure& nu, std::size_t m) {
  if (!nu.is_product()) {
    throw PreconditionError("zero_one_transform needs a coin-toss (product) measure");
  }
  if (!d.exact()) throw PreconditionError("zero_one_transform needs an exact martingale");
  if (m >= 20) throw PreconditionError("zero_one_transform block length too large");

  ZeroOneResult result{d, {}, Rational(0), Rational(0)};
  ZeroOneContext& ctx = result.context;
  ctx.m = m;
  ctx.u = find_light_leaf(d, m, nu);
  const Rational d_u = d.value(ctx.u);

  const std::size_t leaves = std::size_t{1} << m;
  std::vector<bool> heavy(leaves, false);
  // level[v] holds d'(s) for the strings s of the level being processed.
  std::vector<Rational> level(leaves);
  Rational light_sum(0);
  Rational heavy_mass(0);
  for (std::size_t v = 0; v < leaves; ++v) {
    const BitString w = BitString::from_value(v, m);
    const Rational dw = d.value(w);
    if (dw < Rational(1)) {
      ctx.light.push_back(w);
      light_sum += dw * nu.measure_of(w);
      level[v] = dw;
    } else {
      ctx.heavy.push_back(w);
      heavy[v] = true;
      heavy_mass += nu.measure_of(w);
      level[v] = d_u;
    }
  }
  result.two_sum_bound = light_sum + d_u * heavy_mass;

  std::vector<Rational> below((std::size_t{1} << m) - 1);
  for (std::size_t n = m; n-- > 0;) {
    std::vector<Rational> parent(std::size_t{1} << n);
    for (std::size_t v = 0; v < parent.size(); ++v) {
      const BitString s = BitString::from_value(v, n);
      const Rational& c0 = level[2 * v];
      const Rational& c1 = level[2 * v + 1];
      if (nu.is_null(s)) {
        parent[v] = (c0 + c1) / Rational(2);
      } else {
        const Rational alpha = nu.zero_fraction(s);
        parent[v] = alpha * c0 + (Rational(1) - alpha) * c1;
      }
      below[static_cast<std::size_t>(s.index())] = parent[v];
    }
    level = std::move(parent);
  }
  result.initial_value = level[0];

  result.transformed = Martingale(std::make_shared<ZeroOneNode>(
      d, m, ctx.u, std::move(heavy), std::move(below),
      "zero_one(" + d.describe() + ", m=" + std::to_string(m) + ")"));
  return result;
}

}  // namespace rbm
