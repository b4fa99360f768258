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

#include "rbmeasure/martingale.hpp"

#include <algorithm>
#include <utility>

namespace rbm {

Rational MartingaleNode::approximate(const BitString& w, unsigned /*r*/) const {
  return value(w);
}

std::string Evaluation::to_string() const {
  return exact ? value.to_string() : approx.to_string();
}

Martingale::Martingale(std::shared_ptr<const MartingaleNode> node) : node_(std::move(node)) {
  if (!node_) throw PreconditionError("null martingale node");
}

Evaluation Martingale::evaluate(const BitString& w, unsigned r) const {
  Evaluation out;
  if (exact()) {
    out.value = value(w);
    return out;
  }
  out.exact = false;
  out.approx = round_to_dyadic(approximate(w, r + 2), r);
  out.value = out.approx.value();
  return out;
}

namespace {

// Extra precision bits so that k independent errors below 2^-(r+bits) sum to
// less than 2^-r.
unsigned split_bits(std::size_t k) {
  unsigned bits = 0;
  while ((std::size_t{1} << bits) < k) ++bits;
  return bits;
}

class ConstantNode final : public MartingaleNode {
 public:
  explicit ConstantNode(Rational c) : c_(std::move(c)) {}
  bool exact() const override { return true; }
  Rational value(const BitString&) const override { return c_; }
  std::string describe() const override {
    if (c_ == Rational(1)) return "unit";
    if (c_.is_zero()) return "zero";
    return "constant(" + c_.to_string() + ")";
  }

 private:
  Rational c_;
};

class TableNode final : public MartingaleNode {
 public:
  TableNode(std::map<BitString, Rational> values, std::string name)
      : values_(std::move(values)), name_(std::move(name)) {
    if (values_.find(BitString()) == values_.end()) {
      throw PreconditionError("martingale table needs a value at λ");
    }
    for (const auto& [w, v] : values_) {
      if (v.is_negative()) throw PreconditionError("negative martingale value at " + w.display());
      max_len_ = std::max(max_len_, w.size());
    }
  }
  bool exact() const override { return true; }
  Rational value(const BitString& w) const override {
    for (std::size_t n = std::min(w.size(), max_len_) + 1; n-- > 0;) {
      const auto it = values_.find(w.prefix(n));
      if (it != values_.end()) return it->second;
    }
    return values_.at(BitString());
  }
  std::string describe() const override { return name_; }

 private:
  std::map<BitString, Rational> values_;
  std::string name_;
  std::size_t max_len_ = 0;
};

class ScaleNode final : public MartingaleNode {
 public:
  ScaleNode(Rational c, Martingale d) : c_(std::move(c)), d_(std::move(d)) {
    if (c_.is_negative()) throw PreconditionError("negative scale factor");
  }
  bool exact() const override { return d_.exact(); }
  Rational value(const BitString& w) const override {
    if (c_.is_zero()) return Rational(0);
    return c_ * d_.value(w);
  }
  Rational approximate(const BitString& w, unsigned r) const override {
    if (c_.is_zero()) return Rational(0);
    const long s = std::max(0L, c_.ceil_log2());
    return c_ * d_.approximate(w, r + static_cast<unsigned>(s));
  }
  std::string describe() const override {
    return "scale(" + c_.to_string() + ", " + d_.describe() + ")";
  }

 private:
  Rational c_;
  Martingale d_;
};

class SumNode final : public MartingaleNode {
 public:
  explicit SumNode(std::vector<Martingale> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      if (!t.exact()) ++inexact_;
    }
  }
  bool exact() const override { return inexact_ == 0; }
  Rational value(const BitString& w) const override {
    Rational total(0);
    for (const auto& t : terms_) total += t.value(w);
    return total;
  }
  Rational approximate(const BitString& w, unsigned r) const override {
    const unsigned bits = r + split_bits(inexact_);
    Rational total(0);
    for (const auto& t : terms_) total += t.exact() ? t.value(w) : t.approximate(w, bits);
    return total;
  }
  std::string describe() const override {
    std::string out = "sum(";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i > 0) out += ", ";
      out += terms_[i].describe();
    }
    return out + ")";
  }

 private:
  std::vector<Martingale> terms_;
  std::size_t inexact_ = 0;
};

class DifferenceNode final : public MartingaleNode {
 public:
  DifferenceNode(Martingale a, Martingale b, Rational guard)
      : a_(std::move(a)), b_(std::move(b)), guard_(std::move(guard)) {}
  bool exact() const override { return a_.exact() && b_.exact(); }
  Rational value(const BitString& w) const override {
    return sub_guarded(a_.value(w), b_.value(w), guard_);
  }
  Rational approximate(const BitString& w, unsigned r) const override {
    const Rational diff = a_.approximate(w, r + 1) - b_.approximate(w, r + 1);
    return diff.is_negative() ? Rational(0) : diff;
  }
  std::string describe() const override {
    return "difference(" + a_.describe() + ", " + b_.describe() + ")";
  }

 private:
  Martingale a_;
  Martingale b_;
  Rational guard_;
};

class PrefixSetNode final : public MartingaleNode {
 public:
  PrefixSetNode(PrefixSet set, ProbMeasure nu, std::string name)
      : set_(std::move(set)), nu_(std::move(nu)), name_(std::move(name)) {}
  bool exact() const override { return true; }
  Rational value(const BitString& w) const override {
    if (nu_.is_null(w)) {
      for (const auto& u : set_.members()) {
        if (u.is_prefix_of(w)) return Rational(1);
      }
      return Rational(0);
    }
    Rational total(0);
    for (const auto& u : set_.members()) total += nu_.conditional(u, w);
    return total;
  }
  std::string describe() const override { return name_; }

 private:
  PrefixSet set_;
  ProbMeasure nu_;
  std::string name_;
};

class IndicatorNode final : public MartingaleNode {
 public:
  explicit IndicatorNode(BitString w) : w_(std::move(w)) {}
  bool exact() const override { return true; }
  Rational value(const BitString& v) const override {
    return Rational(w_.is_prefix_of(v) ? 1 : 0);
  }
  std::string describe() const override { return "indicator(" + w_.display() + ")"; }

 private:
  BitString w_;
};

class FunctionNode final : public MartingaleNode {
 public:
  FunctionNode(std::string name, std::function<Rational(const BitString&)> f)
      : name_(std::move(name)), f_(std::move(f)) {}
  bool exact() const override { return true; }
  Rational value(const BitString& w) const override { return f_(w); }
  std::string describe() const override { return name_; }

 private:
  std::string name_;
  std::function<Rational(const BitString&)> f_;
};

std::string prefix_set_name(const PrefixSet& set) {
  std::string out = "from_prefix_set({";
  for (std::size_t i = 0; i < set.members().size(); ++i) {
    if (i > 0) out += ",";
    out += set.members()[i].display();
  }
  return out + "})";
}

}  // namespace

Martingale unit() { return constant(Rational(1)); }

Martingale zero() { return constant(Rational(0)); }

Martingale constant(const Rational& c) {
  if (c.is_negative()) throw PreconditionError("negative constant martingale");
  return Martingale(std::make_shared<ConstantNode>(c));
}

Martingale table(std::map<BitString, Rational> values, std::string name) {
  return Martingale(std::make_shared<TableNode>(std::move(values), std::move(name)));
}

Martingale scale(const Rational& c, const Martingale& d) {
  return Martingale(std::make_shared<ScaleNode>(c, d));
}

Martingale sum(std::vector<Martingale> terms) {
  if (terms.empty()) return zero();
  if (terms.size() == 1) return terms.front();
  return Martingale(std::make_shared<SumNode>(std::move(terms)));
}

Martingale difference(const Martingale& a, const Martingale& b, const Rational& guard) {
  return Martingale(std::make_shared<DifferenceNode>(a, b, guard));
}

Martingale from_prefix_set(const PrefixSet& set, const ProbMeasure& nu) {
  return Martingale(std::make_shared<PrefixSetNode>(set, nu, prefix_set_name(set)));
}

Martingale indicator(const BitString& w) {
  return Martingale(std::make_shared<IndicatorNode>(w));
}

Martingale z3_ladder(unsigned r, const ProbMeasure& nu) {
  return Martingale(std::make_shared<PrefixSetNode>(PrefixSet({BitString::zeros(r + 1)}), nu,
                                                    "z3_ladder(" + std::to_string(r) + ")"));
}

Martingale doubling_ladder(std::size_t depth) {
  std::map<BitString, Rational> values;
  values.emplace(BitString(), Rational(1, 2));
  for (std::size_t k = 1; k <= depth; ++k) {
    values.emplace(BitString::zeros(k), Rational::pow2(static_cast<long>(k) - 1));
    values.emplace(BitString::zeros(k - 1).child(1), Rational(0));
  }
  return table(std::move(values), "doubling_ladder(" + std::to_string(depth) + ")");
}

Martingale from_function(std::string name, std::function<Rational(const BitString&)> f) {
  return Martingale(std::make_shared<FunctionNode>(std::move(name), std::move(f)));
}

MartingaleReport verify_martingale(const Martingale& d, const ProbMeasure& nu, std::size_t depth,
                                   unsigned tolerance_bits) {
  MartingaleReport report;
  report.exact = d.exact();
  const unsigned t = tolerance_bits;
  std::unordered_map<BitString, Rational> values;
  auto at = [&](const BitString& w) -> const Rational& {
    auto it = values.find(w);
    if (it == values.end()) {
      it = values.emplace(w, report.exact ? d.value(w) : d.approximate(w, t)).first;
    }
    return it->second;
  };
  const Rational slack = report.exact ? Rational(0) : Rational::pow2(-static_cast<long>(t));
  for_each_string_below(depth + 1, [&](const BitString& w) {
    ++report.strings_visited;
    const Rational& v = at(w);
    if (v < -slack) {
      report.violations.push_back({w, "negative", v});
    }
    if (w.size() == depth) return;
    const Rational nw = nu.measure_of(w);
    const BitString w0 = w.child(0);
    const BitString w1 = w.child(1);
    const Rational residual =
        v * nw - at(w0) * nu.measure_of(w0) - at(w1) * nu.measure_of(w1);
    const Rational allowed = slack * Rational(2) * nw;
    if (abs(residual) > allowed) report.violations.push_back({w, "identity", residual});
  });
  report.ok = report.violations.empty();
  return report;
}

PrefixSumBound prefix_sum_bound(const Martingale& d, const PrefixSet& set,
                                const ProbMeasure& nu) {
  PrefixSumBound out;
  out.lhs = Rational(0);
  for (const auto& w : set.members()) out.lhs += d.value(w) * nu.measure_of(w);
  out.bound = d.value(BitString());
  out.holds = out.lhs <= out.bound;
  return out;
}

CoverageCertificate covers(const Martingale& d, const BitString& w) {
  CoverageCertificate cert;
  cert.subject = w;
  for (std::size_t n = 0; n <= w.size(); ++n) {
    const BitString v = w.prefix(n);
    Rational value = d.value(v);
    if (value >= Rational(1)) {
      cert.covered = true;
      cert.witness = v;
      cert.value = std::move(value);
      return cert;
    }
  }
  cert.depth = w.size();
  return cert;
}

ClopenSet coverage_set(const Martingale& d, std::size_t n) {
  std::vector<BitString> witnesses;
  std::function<void(const BitString&)> visit = [&](const BitString& w) {
    if (d.value(w) >= Rational(1)) {
      witnesses.push_back(w);
      return;
    }
    if (w.size() == n) return;
    visit(w.child(0));
    visit(w.child(1));
  };
  visit(BitString());
  return ClopenSet::from_strings(witnesses);
}

}  // namespace rbm
