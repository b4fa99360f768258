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

#include "rbmeasure/splitting.hpp"

#include <utility>

#include "rbmeasure/regularity.hpp"

namespace rbm {

namespace {

class CylinderPlusNode final : public MartingaleNode {
 public:
  CylinderPlusNode(BitString w, ProbMeasure nu, Martingale big_d)
      : w_(std::move(w)), nu_(std::move(nu)), big_d_(std::move(big_d)) {
    nu_w_ = nu_.measure_of(w_);
    if (nu_w_.is_zero()) throw PreconditionError("cylinder_plus needs nu(w) > 0");
  }

  bool exact() const override { return big_d_.exact(); }

  Rational value(const BitString& v) const override {
    if (w_.is_prefix_of(v)) return big_d_.value(v);
    if (v.is_prefix_of(w_)) return big_d_.value(w_) * nu_w_ / nu_.measure_of(v);
    return Rational(0);
  }

  Rational approximate(const BitString& v, unsigned r) const override {
    if (w_.is_prefix_of(v)) return big_d_.approximate(v, r);
    if (v.is_prefix_of(w_)) {
      // nu(w)/nu(v) <= 1, so the error does not grow.
      return big_d_.approximate(w_, r) * nu_w_ / nu_.measure_of(v);
    }
    return Rational(0);
  }

  std::string describe() const override {
    return "cylinder_plus(" + w_.display() + ", " + big_d_.describe() + ")";
  }

 private:
  BitString w_;
  ProbMeasure nu_;
  Martingale big_d_;
  Rational nu_w_;
};

constexpr std::size_t kEagerTargetDepth = 12;

// Upper bound on m(lambda), exact when m is exact.
Rational upper_at_lambda(const Martingale& m, unsigned r) {
  if (m.exact()) return m.value(BitString());
  const unsigned t = r + 4;
  return m.approximate(BitString(), t) + Rational::pow2(-static_cast<long>(t));
}

}  // namespace

SplitTarget SplitTarget::of_clopen(const ClopenSet& x) {
  SplitTarget target;
  target.plus_inner = [x](std::size_t) { return x; };
  target.minus_inner = [x](std::size_t) { return x.complement(); };
  target.clopen = x;
  return target;
}

SplitTarget SplitTarget::swapped() const {
  SplitTarget out;
  out.plus_inner = minus_inner;
  out.minus_inner = plus_inner;
  if (clopen) out.clopen = clopen->complement();
  return out;
}

SplittingOp::SplittingOp(std::string provenance, ProbMeasure nu, ApplyFn apply,
                         std::optional<SplitTarget> target)
    : provenance_(std::move(provenance)),
      nu_(std::move(nu)),
      apply_(std::move(apply)),
      target_(std::move(target)) {}

Martingale cylinder_plus(const BitString& w, const ProbMeasure& nu, const Martingale& big_d) {
  return Martingale(std::make_shared<CylinderPlusNode>(w, nu, big_d));
}

SplittingOp cylinder_measurement(const BitString& w, const ProbMeasure& nu) {
  const std::string name = "cylinder(" + w.display() + ")";
  const SplitTarget target = SplitTarget::of_clopen(ClopenSet::cylinder(w));
  if (nu.is_null(w)) {
    return SplittingOp(
        name, nu, [w](unsigned, const Martingale& d) { return SplitPair{indicator(w), d}; },
        target);
  }
  return SplittingOp(
      name, nu,
      [w, nu](unsigned, const Martingale& d) {
        const Martingale big_d = regularize(d, nu);
        const Martingale plus = cylinder_plus(w, nu, big_d);
        return SplitPair{plus, difference(big_d, plus)};
      },
      target);
}

SplittingOp prefix_set_measurement(const PrefixSet& set, const ProbMeasure& nu) {
  std::vector<BitString> positive;
  std::vector<BitString> null;
  for (const auto& u : set.members()) (nu.is_null(u) ? null : positive).push_back(u);
  std::string name = "prefix_set({";
  for (std::size_t i = 0; i < set.members().size(); ++i) {
    if (i > 0) name += ",";
    name += set.members()[i].display();
  }
  name += "})";
  std::optional<SplitTarget> target;
  if (set.max_length() <= kEagerTargetDepth) {
    target = SplitTarget::of_clopen(ClopenSet::from_strings(set.members()));
  } else if (set.max_length() <= ClopenSet::kMaxDepth) {
    // Deep targets are materialized only when a verifier asks for them.
    const std::vector<BitString> members = set.members();
    target = SplitTarget{
        [members](std::size_t) { return ClopenSet::from_strings(members); },
        [members](std::size_t) { return ClopenSet::from_strings(members).complement(); },
        std::nullopt};
  }
  return SplittingOp(
      name, nu,
      [positive, null, nu](unsigned, const Martingale& d) {
        std::vector<Martingale> indicators;
        for (const auto& u : null) indicators.push_back(indicator(u));
        if (positive.empty()) return SplitPair{sum(std::move(indicators)), d};
        const Martingale big_d = regularize(d, nu);
        std::vector<Martingale> parts;
        for (const auto& u : positive) parts.push_back(cylinder_plus(u, nu, big_d));
        const Martingale covered = sum(parts);
        for (auto& m : indicators) parts.push_back(std::move(m));
        return SplitPair{sum(std::move(parts)), difference(big_d, covered)};
      },
      target);
}

SplittingOp clopen_measurement(const ClopenSet& x, const ProbMeasure& nu) {
  return prefix_set_measurement(x.minimal_prefix_set(), nu);
}

SplittingOp complement(const SplittingOp& op) {
  std::optional<SplitTarget> target;
  if (op.target()) target = op.target()->swapped();
  return SplittingOp(
      "complement(" + op.provenance() + ")", op.measure(),
      [op](unsigned r, const Martingale& d) {
        SplitPair p = op.apply(r, d);
        return SplitPair{p.minus, p.plus};
      },
      std::move(target));
}

CombinedMeasurements combine_pair(const SplittingOp& phi, const SplittingOp& psi) {
  if (phi.measure().describe() != psi.measure().describe()) {
    throw PreconditionError("combine_pair: measure mismatch (" + phi.measure().describe() +
                            " vs " + psi.measure().describe() + ")");
  }
  struct Quad {
    Martingale pp, pm, mp, mm;
  };
  auto theta = [phi, psi](unsigned r, const Martingale& d) {
    const SplitPair a = phi.apply(r + 1, d);
    const SplitPair from_plus = psi.apply(r + 2, a.plus);
    const SplitPair from_minus = psi.apply(r + 2, a.minus);
    return Quad{from_plus.plus, from_plus.minus, from_minus.plus, from_minus.minus};
  };
  const std::string pair = phi.provenance() + ", " + psi.provenance();
  const ProbMeasure& nu = phi.measure();

  std::optional<SplitTarget> tx = phi.target();
  std::optional<SplitTarget> ty = psi.target();
  std::optional<SplitTarget> t_and;
  std::optional<SplitTarget> t_or;
  if (tx && ty) {
    auto x_plus = tx->plus_inner, x_minus = tx->minus_inner;
    auto y_plus = ty->plus_inner, y_minus = ty->minus_inner;
    t_and = SplitTarget{
        [x_plus, y_plus](std::size_t n) { return set_intersection(x_plus(n), y_plus(n)); },
        [x_minus, y_minus](std::size_t n) { return set_union(x_minus(n), y_minus(n)); },
        std::nullopt};
    t_or = SplitTarget{
        [x_plus, y_plus](std::size_t n) { return set_union(x_plus(n), y_plus(n)); },
        [x_minus, y_minus](std::size_t n) { return set_intersection(x_minus(n), y_minus(n)); },
        std::nullopt};
    if (tx->clopen && ty->clopen) {
      t_and->clopen = set_intersection(*tx->clopen, *ty->clopen);
      t_or->clopen = set_union(*tx->clopen, *ty->clopen);
    }
  }

  return CombinedMeasurements{
      SplittingOp("combine_x(" + pair + ")", nu,
                  [theta](unsigned r, const Martingale& d) {
                    const Quad q = theta(r, d);
                    return SplitPair{sum({q.pp, q.pm}), sum({q.mp, q.mm})};
                  },
                  tx),
      SplittingOp("combine_y(" + pair + ")", nu,
                  [theta](unsigned r, const Martingale& d) {
                    const Quad q = theta(r, d);
                    return SplitPair{sum({q.pp, q.mp}), sum({q.pm, q.mm})};
                  },
                  ty),
      SplittingOp("intersection(" + pair + ")", nu,
                  [theta](unsigned r, const Martingale& d) {
                    const Quad q = theta(r, d);
                    return SplitPair{q.pp, sum({q.pm, q.mp, q.mm})};
                  },
                  t_and),
      SplittingOp("union(" + pair + ")", nu,
                  [theta](unsigned r, const Martingale& d) {
                    const Quad q = theta(r, d);
                    return SplitPair{sum({q.pp, q.pm, q.mp}), q.mm};
                  },
                  t_or),
  };
}

SplittingOp completeness_measurement(const SplittingOp& psi, unsigned eager_check_bits) {
  auto evidence = [psi](unsigned r) {
    const Martingale p = psi.apply(r, unit()).plus;
    const Rational bound = Rational::pow2(-static_cast<long>(r));
    if (upper_at_lambda(p, r) > bound) {
      throw EvaluationError("completeness: estimate of " + psi.provenance() + " at r=" +
                            std::to_string(r) + " exceeds 2^-r");
    }
    return p;
  };
  for (unsigned r = 0; r <= eager_check_bits; ++r) {
    try {
      evidence(r);
    } catch (const EvaluationError& e) {
      throw PreconditionError(e.what());
    }
  }
  return SplittingOp(
      "completeness(" + psi.provenance() + ")", psi.measure(),
      [evidence](unsigned r, const Martingale& d) { return SplitPair{evidence(r), d}; },
      psi.target());
}

SplittingOp broken_operator(const ProbMeasure& nu) {
  return SplittingOp(
      "broken", nu, [](unsigned, const Martingale&) { return SplitPair{unit(), unit()}; },
      SplitTarget::of_clopen(ClopenSet::full()));
}

MeasureEstimate measure_estimate(const SplittingOp& op, unsigned r) {
  MeasureEstimate est;
  const SplitPair pair = op.apply(r, unit());
  const Rational unit_err = Rational::pow2(-static_cast<long>(r));
  Rational err(0);
  auto read = [&](const Martingale& m) {
    if (m.exact()) return m.value(BitString());
    est.exact = false;
    const unsigned t = r + 4;
    err = Rational::pow2(-static_cast<long>(t));
    return m.approximate(BitString(), t);
  };
  est.plus_value = read(pair.plus);
  est.minus_value = read(pair.minus);
  auto clamp = [](const Rational& x) { return min(max(x, Rational(0)), Rational(1)); };
  est.lower = clamp(est.plus_value - unit_err - err);
  est.upper = clamp(est.plus_value + err);
  const Rational gap = abs(Rational(1) - est.minus_value - est.plus_value);
  est.consistent = gap <= unit_err * Rational(2) + err * Rational(2);
  return est;
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kUntestable:
      return "untestable";
  }
  return "unknown";
}

bool SplitReport::ok() const {
  for (CheckStatus s : {budget, cover_plus, cover_minus, plus_identity, minus_identity}) {
    if (s == CheckStatus::kFail) return false;
  }
  return true;
}

SplitReport verify_splitting(const SplittingOp& op, const Martingale& d, unsigned r,
                             std::size_t n) {
  SplitReport report;
  const SplitPair pair = op.apply(r, d);
  const ProbMeasure& nu = op.measure();
  const Rational budget_unit = Rational::pow2(-static_cast<long>(r));
  const BitString lambda;

  // Condition (iii).
  if (d.exact() && pair.plus.exact() && pair.minus.exact()) {
    report.budget_slack =
        d.value(lambda) + budget_unit - pair.plus.value(lambda) - pair.minus.value(lambda);
    if (report.budget_slack.is_negative()) {
      report.budget = CheckStatus::kFail;
      report.details.push_back("condition (iii) fails: d+(λ) + d-(λ) exceeds d(λ) + 2^-" +
                               std::to_string(r) + " by " + (-report.budget_slack).to_string());
    }
  } else {
    const unsigned t = r + 8;
    const Rational e = Rational::pow2(-static_cast<long>(t));
    const Rational total = pair.plus.approximate(lambda, t) + pair.minus.approximate(lambda, t);
    const Rational base = d.approximate(lambda, t);
    report.budget_slack = base + budget_unit - total;
    if (total + e * Rational(2) <= base - e + budget_unit) {
      report.budget = CheckStatus::kPass;
    } else if (total - e * Rational(2) > base + e + budget_unit) {
      report.budget = CheckStatus::kFail;
      report.details.push_back("condition (iii) fails beyond approximation error");
    } else {
      report.budget = CheckStatus::kUntestable;
      report.details.push_back("condition (iii) within approximation error of the boundary");
    }
  }

  // Conditions (i) and (ii).
  if (!op.target()) {
    report.cover_plus = report.cover_minus = CheckStatus::kUntestable;
    report.details.push_back("target is not clopen; coverage untestable");
  } else if (!d.exact() || !pair.plus.exact() || !pair.minus.exact()) {
    report.cover_plus = report.cover_minus = CheckStatus::kUntestable;
    report.details.push_back("inexact outputs; coverage untestable");
  } else {
    const ClopenSet plus_set = op.target()->plus_inner(n);
    const ClopenSet minus_set = op.target()->minus_inner(n);
    const Rational one(1);
    std::function<void(const BitString&, bool, bool, bool)> visit =
        [&](const BitString& w, bool premise, bool plus_hit, bool minus_hit) {
          premise = premise || (!nu.is_null(w) && d.value(w) >= one);
          plus_hit = plus_hit || pair.plus.value(w) >= one;
          minus_hit = minus_hit || pair.minus.value(w) >= one;
          if (w.size() < n) {
            visit(w.child(0), premise, plus_hit, minus_hit);
            visit(w.child(1), premise, plus_hit, minus_hit);
            return;
          }
          if (!premise) return;
          if (plus_set.contains_cylinder(w) && !plus_hit) {
            report.cover_plus = CheckStatus::kFail;
            report.details.push_back("condition (i) fails at " + w.display());
          }
          if (minus_set.contains_cylinder(w) && !minus_hit) {
            report.cover_minus = CheckStatus::kFail;
            report.details.push_back("condition (ii) fails at " + w.display());
          }
        };
    visit(lambda, false, false, false);
  }

  // Both outputs must be martingales.
  const MartingaleReport plus_report = verify_martingale(pair.plus, nu, n);
  const MartingaleReport minus_report = verify_martingale(pair.minus, nu, n);
  if (!plus_report.ok) {
    report.plus_identity = CheckStatus::kFail;
    report.details.push_back("d+ violates the martingale identity at " +
                             plus_report.violations.front().w.display());
  }
  if (!minus_report.ok) {
    report.minus_identity = CheckStatus::kFail;
    report.details.push_back("d- violates the martingale identity at " +
                             minus_report.violations.front().w.display());
  }
  return report;
}

}  // namespace rbm
