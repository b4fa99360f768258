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

#include "rbmeasure/regularity.hpp"

#include <functional>

namespace rbm {

Rational weighted_average(const Rational& alpha, const Rational& s, const Rational& t) {
  return alpha * s + (Rational(1) - alpha) * t;
}

bool in_robin_hood_domain(const Rational& alpha, const Rational& s, const Rational& t) {
  if (!s.is_negative() && !t.is_negative()) return true;
  return weighted_average(alpha, s, t) >= Rational(1);
}

RobinHoodResult robin_hood(const Rational& alpha, const Rational& s, const Rational& t) {
  const Rational one(1);
  if (alpha.sign() <= 0 || alpha >= one) {
    throw PreconditionError("robin_hood needs alpha in (0,1), got " + alpha.to_string());
  }
  if (!in_robin_hood_domain(alpha, s, t)) {
    throw PreconditionError("robin_hood input (" + s.to_string() + ", " + t.to_string() +
                            ") is outside D_alpha");
  }
  if (!s.is_negative() && !t.is_negative() && s <= one && t <= one) return {s, t, 1};
  const Rational m = weighted_average(alpha, s, t);
  if (m >= one) return {m, m, 2};
  // Outside H_alpha the point is in [0,inf)^2 but not [0,1]^2.
  if (s >= one) return {one, weighted_average(alpha, s - one, t) / (one - alpha), 3};
  return {weighted_average(alpha, s, t - one) / alpha, one, 4};
}

namespace {

class RegularizedNode final : public MartingaleNode {
 public:
  RegularizedNode(Martingale d, ProbMeasure nu) : d_(std::move(d)), nu_(std::move(nu)) {
    if (!d_.exact()) throw PreconditionError("regularize needs an exact martingale");
  }

  bool exact() const override { return true; }

  Rational value(const BitString& w) const override {
    Rational cached;
    if (memo_.lookup(w, &cached)) return cached;
    // Find the deepest memoized prefix, then walk down from it.
    std::size_t n = w.size();
    Rational current;
    while (true) {
      if (n == 0) {
        if (!memo_.lookup(BitString(), &current)) {
          current = d_.value(BitString());
          memo_.store(BitString(), current);
        }
        break;
      }
      if (memo_.lookup(w.prefix(n), &current)) break;
      --n;
    }
    for (; n < w.size(); ++n) {
      current = step(w.prefix(n), current, w[n]);
      memo_.store(w.prefix(n + 1), current);
    }
    return current;
  }

  std::string describe() const override { return "regularize(" + d_.describe() + ")"; }

 private:
  // Lambda(d)(wb) from Lambda(d)(w).
  Rational step(const BitString& w, const Rational& lambda_w, int b) const {
    if (nu_.is_null(w)) return lambda_w;
    const Rational alpha = nu_.zero_fraction(w);
    if (alpha.is_zero() || alpha == Rational(1)) return lambda_w;
    const Rational base = lambda_w - d_.value(w);
    const Rational g0 = base + d_.value(w.child(0));
    const Rational g1 = base + d_.value(w.child(1));
    const RobinHoodResult rh = robin_hood(alpha, g0, g1);
    return b == 0 ? rh.s : rh.t;
  }

  Martingale d_;
  ProbMeasure nu_;
  MemoTable<Rational> memo_;
};

}  // namespace

Martingale regularize(const Martingale& d, const ProbMeasure& nu) {
  return Martingale(std::make_shared<RegularizedNode>(d, nu));
}

RegularityReport check_regularity(const Martingale& d, std::size_t depth) {
  RegularityReport report;
  const Rational one(1);
  // Depth-first: carry the shortest prefix that reached 1.
  std::function<void(const BitString&, const BitString*)> visit =
      [&](const BitString& w, const BitString* witness) {
        const bool high = d.value(w) >= one;
        if (witness != nullptr) {
          ++report.pairs_checked;
          if (!high) {
            report.ok = false;
            report.failures.push_back("d(" + witness->display() + ") >= 1 but d(" +
                                      w.display() + ") < 1");
          }
        }
        const BitString* next = witness != nullptr ? witness : (high ? &w : nullptr);
        if (w.size() == depth) return;
        visit(w.child(0), next);
        visit(w.child(1), next);
      };
  visit(BitString(), nullptr);
  return report;
}

RegularityReport check_success_containment(const Martingale& d, const Martingale& lambda_d,
                                           const ProbMeasure& nu, std::size_t depth) {
  RegularityReport report;
  const Rational one(1);
  std::function<void(const BitString&, bool)> visit = [&](const BitString& w, bool covered) {
    covered = covered || (!nu.is_null(w) && d.value(w) >= one);
    if (covered) {
      ++report.pairs_checked;
      if (lambda_d.value(w) < one) {
        report.ok = false;
        report.failures.push_back("d covers " + w.display() + " but the regularized value is " +
                                  lambda_d.value(w).to_string());
      }
    }
    if (w.size() == depth) return;
    visit(w.child(0), covered);
    visit(w.child(1), covered);
  };
  visit(BitString(), false);
  return report;
}

}  // namespace rbm
