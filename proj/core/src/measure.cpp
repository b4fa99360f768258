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

#include "rbmeasure/measure.hpp"

#include <algorithm>

namespace rbm {

namespace {

const std::map<BitString, Rational>& empty_table() {
  static const std::map<BitString, Rational> kEmpty;
  return kEmpty;
}

void check_probability(const Rational& p, const char* what) {
  if (p.is_negative() || p > Rational(1)) {
    throw PreconditionError(std::string(what) + " " + p.to_string() + " is not in [0,1]");
  }
}

// ceil(log2(1/p)) for 0 < p <= 1: the least l with p >= 2^-l.
unsigned long bits_for(const Rational& p) {
  return static_cast<unsigned long>((Rational(1) / p).ceil_log2());
}

}  // namespace

ProbMeasure::ProbMeasure() = default;

ProbMeasure ProbMeasure::coin_toss(std::vector<Rational> biases, Rational tail) {
  for (const auto& b : biases) check_probability(b, "bias");
  check_probability(tail, "tail bias");
  ProbMeasure nu;
  nu.kind_ = MeasureKind::kCoinToss;
  nu.biases_ = std::move(biases);
  nu.tail_ = std::move(tail);
  for (const auto& b : nu.biases_) nu.zero_odds_.push_back(Rational(1) - b);
  nu.tail_zero_odds_ = Rational(1) - nu.tail_;
  return nu;
}

ProbMeasure ProbMeasure::table(std::size_t depth, std::map<BitString, Rational> values,
                               TableExtension extension) {
  const TableReport report = validate_table_measure(depth, values);
  if (!report.valid) {
    throw PreconditionError("invalid table measure: " + report.violations.front());
  }
  ProbMeasure nu;
  nu.kind_ = MeasureKind::kTable;
  nu.table_depth_ = depth;
  nu.extension_ = extension;
  nu.table_ = std::make_shared<const std::map<BitString, Rational>>(std::move(values));
  return nu;
}

const std::map<BitString, Rational>& ProbMeasure::table_values() const {
  return table_ ? *table_ : empty_table();
}

Rational ProbMeasure::bias(std::size_t k) const {
  switch (kind_) {
    case MeasureKind::kUniform:
      return Rational(1, 2);
    case MeasureKind::kCoinToss:
      return k < biases_.size() ? biases_[k] : tail_;
    case MeasureKind::kTable:
      break;
  }
  throw PreconditionError("bias() is undefined for table measures");
}

Rational ProbMeasure::measure_of(const BitString& w) const {
  switch (kind_) {
    case MeasureKind::kUniform:
      return Rational::pow2(-static_cast<long>(w.size()));
    case MeasureKind::kCoinToss: {
      Rational p(1);
      const std::size_t listed = biases_.size();
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] == 1) {
          p *= k < listed ? biases_[k] : tail_;
        } else {
          p *= k < listed ? zero_odds_[k] : tail_zero_odds_;
        }
        if (p.is_zero()) break;
      }
      return p;
    }
    case MeasureKind::kTable:
      break;
  }
  if (w.size() <= table_depth_) return table_->at(w);
  if (extension_ == TableExtension::kNone) {
    throw PreconditionError("query " + w.display() + " below the table depth " +
                            std::to_string(table_depth_));
  }
  return table_->at(w.prefix(table_depth_)) *
         Rational::pow2(-static_cast<long>(w.size() - table_depth_));
}

Rational ProbMeasure::conditional(const BitString& v, const BitString& w) const {
  const Rational nw = measure_of(w);
  if (nw.is_zero()) throw PreconditionError("conditioning on a null cylinder " + w.display());
  if (v.is_prefix_of(w)) return Rational(1);
  if (w.is_prefix_of(v)) return measure_of(v) / nw;
  return Rational(0);
}

Rational ProbMeasure::zero_fraction(const BitString& w) const {
  if (kind_ != MeasureKind::kTable) {
    if (is_null(w)) throw PreconditionError("conditioning on a null cylinder " + w.display());
    return Rational(1) - bias(w.size());
  }
  return conditional(w.child(0), w);
}

unsigned long ProbMeasure::positivity_bits(std::size_t n) const {
  switch (kind_) {
    case MeasureKind::kUniform:
      return n;
    case MeasureKind::kCoinToss: {
      unsigned long l = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const Rational b = bias(k);
        const Rational lo = min(b, Rational(1) - b);
        // A degenerate coin has one factor 1 (0 bits) and one factor 0.
        l += lo.is_zero() ? 0 : bits_for(lo);
      }
      return l;
    }
    case MeasureKind::kTable:
      break;
  }
  if (n > table_depth_ && extension_ == TableExtension::kNone) {
    throw PreconditionError("positivity bound below the table depth");
  }
  const std::size_t scan = std::min(n, table_depth_);
  Rational least(1);
  for (const auto& [w, p] : *table_) {
    if (w.size() == scan && !p.is_zero() && p < least) least = p;
  }
  return bits_for(least) + (n - scan);
}

std::string ProbMeasure::describe() const {
  switch (kind_) {
    case MeasureKind::kUniform:
      return "uniform";
    case MeasureKind::kCoinToss: {
      std::string out = "coin_toss[";
      for (std::size_t i = 0; i < biases_.size(); ++i) {
        if (i > 0) out += ",";
        out += biases_[i].to_string();
      }
      return out + ";" + tail_.to_string() + "]";
    }
    case MeasureKind::kTable:
      break;
  }
  return "table[depth=" + std::to_string(table_depth_) + "]";
}

TableReport validate_table_measure(std::size_t depth,
                                   const std::map<BitString, Rational>& values) {
  TableReport report;
  auto fail = [&report](std::string message) {
    report.valid = false;
    report.violations.push_back(std::move(message));
  };
  for (const auto& [w, p] : values) {
    if (w.size() > depth) fail("entry " + w.display() + " is deeper than the table");
  }
  for_each_string_below(depth + 1, [&](const BitString& w) {
    const auto it = values.find(w);
    if (it == values.end()) {
      fail("missing value at " + w.display());
      return;
    }
    const Rational& p = it->second;
    if (p.is_negative()) fail("negative value at " + w.display());
    if (w.empty() && p != Rational(1)) fail("nu(λ) = " + p.to_string() + " != 1");
    if (w.size() == depth) return;
    const auto c0 = values.find(w.child(0));
    const auto c1 = values.find(w.child(1));
    if (c0 == values.end() || c1 == values.end()) return;
    const Rational sum = c0->second + c1->second;
    if (sum != p) {
      fail("additivity fails at " + w.display() + ": " + p.to_string() + " != " +
           sum.to_string());
    }
  });
  return report;
}

ProbMeasure two_spine_measure(std::size_t depth) {
  std::map<BitString, Rational> values;
  for_each_string_below(depth + 1, [&](const BitString& w) {
    Rational p(0);
    if (w.empty()) {
      p = Rational(1);
    } else if (w == BitString::zeros(w.size()) ||
               w.to_string() == std::string(w.size(), '1')) {
      p = Rational(1, 2);
    }
    values.emplace(w, p);
  });
  return ProbMeasure::table(depth, std::move(values), TableExtension::kProportional);
}

}  // namespace rbm
