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

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "rbmeasure/cantor.hpp"
#include "rbmeasure/measure.hpp"
#include "rbmeasure/numerics.hpp"

namespace rbm {

/// One node of a martingale expression tree.
///
/// Exact nodes implement value(). Inexact nodes implement approximate() and
/// report exact() == false; their value() throws EvaluationError.
class MartingaleNode {
 public:
  virtual ~MartingaleNode() = default;

  virtual bool exact() const = 0;
  virtual Rational value(const BitString& w) const = 0;
  /// Some q with |q - d(w)| < 2^-r. Exact nodes return value(w).
  virtual Rational approximate(const BitString& w, unsigned r) const;
  virtual std::string describe() const = 0;
};

/// The result of evaluating a martingale at one string.
struct Evaluation {
  bool exact = true;
  Rational value;       // exact value, or approx.value() when inexact
  DyadicApprox approx;  // only meaningful when !exact

  /// "p/q" for exact values, "m*2^-r" otherwise.
  std::string to_string() const;
};

/// Immutable handle to a martingale expression. Copies share the tree.
class Martingale {
 public:
  explicit Martingale(std::shared_ptr<const MartingaleNode> node);

  bool exact() const { return node_->exact(); }
  /// Exact value. Throws EvaluationError for inexact expressions.
  Rational value(const BitString& w) const { return node_->value(w); }
  Rational operator()(const BitString& w) const { return value(w); }
  /// |result - d(w)| < 2^-r.
  Rational approximate(const BitString& w, unsigned r) const {
    return node_->approximate(w, r);
  }
  /// Exact value when available, otherwise a dyadic approximation with error
  /// strictly below 2^-r.
  Evaluation evaluate(const BitString& w, unsigned r) const;

  std::string describe() const { return node_->describe(); }
  const MartingaleNode& node() const { return *node_; }
  const std::shared_ptr<const MartingaleNode>& ptr() const { return node_; }

 private:
  std::shared_ptr<const MartingaleNode> node_;
};

/// Thread-safe memo table used by nodes whose evaluation is recursive.
template <typename Value>
class MemoTable {
 public:
  template <typename Compute>
  Value get_or_compute(const BitString& key, Compute&& compute) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto it = table_.find(key);
      if (it != table_.end()) return it->second;
    }
    Value v = compute();
    std::lock_guard<std::mutex> lock(mu_);
    return table_.emplace(key, std::move(v)).first->second;
  }

  bool lookup(const BitString& key, Value* out) const {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = table_.find(key);
    if (it == table_.end()) return false;
    *out = it->second;
    return true;
  }

  void store(const BitString& key, Value v) const {
    std::lock_guard<std::mutex> lock(mu_);
    table_.emplace(key, std::move(v));
  }

 private:
  mutable std::mutex mu_;
  mutable std::unordered_map<BitString, Value> table_;
};

// ---------------------------------------------------------------------------
// Combinators
// ---------------------------------------------------------------------------

/// The constant-1 martingale.
Martingale unit();
/// The constant-0 martingale.
Martingale zero();
/// The constant-c martingale (c >= 0).
Martingale constant(const Rational& c);

/// Finite table with inheritance: d(w) is the entry of the longest prefix of w
/// present in `values` (so strings past the table continue constantly).
/// `values` must contain lambda and only nonnegative entries. The identity is
/// the caller's responsibility; verify_martingale checks it.
Martingale table(std::map<BitString, Rational> values, std::string name = "table");

/// c * d, c >= 0.
Martingale scale(const Rational& c, const Martingale& d);
/// d_1 + ... + d_k. The approximation budget is split evenly.
Martingale sum(std::vector<Martingale> terms);
/// a - b where b <= a is known; overshoot beyond `guard` throws EvaluationError.
Martingale difference(const Martingale& a, const Martingale& b,
                      const Rational& guard = Rational(0));

/// d(w) = sum over u in A of nu(u | w). On nu-null w (where the conditional is
/// undefined) d(w) = 1 if w extends a member of A, else 0.
Martingale from_prefix_set(const PrefixSet& set, const ProbMeasure& nu);

/// The 0/1 martingale [w is a prefix of v], a nu-martingale whenever nu(w) = 0.
Martingale indicator(const BitString& w);

/// The ladder d(w) = nu(0^{r+1} | w); under the uniform measure this is
/// 2^{|w|-(r+1)} below 0^{r+1}, 1 above it and 0 elsewhere.
Martingale z3_ladder(unsigned r, const ProbMeasure& nu = ProbMeasure::uniform());

/// Doubling ladder under the uniform measure: d(lambda) = 1/2,
/// d(0^k) = 2^{k-1} for 1 <= k <= depth, 0 off the spine, constant past depth.
Martingale doubling_ladder(std::size_t depth);

/// Wraps an exact function as a martingale node (no identity check).
Martingale from_function(std::string name, std::function<Rational(const BitString&)> f);

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct MartingaleViolation {
  BitString w;
  std::string kind;   // "identity" or "negative"
  Rational residual;  // d(w)nu(w) - d(w0)nu(w0) - d(w1)nu(w1), or the value
};

struct MartingaleReport {
  bool ok = true;
  bool exact = true;
  std::size_t strings_visited = 0;
  std::vector<MartingaleViolation> violations;
};

/// Checks the identity at every |w| < depth and nonnegativity at every
/// |w| <= depth (2^{depth+1} - 1 strings). Exact expressions are checked
/// exactly. Inexact ones are evaluated at precision `tolerance_bits` and the
/// identity is accepted within 2^{1-t} nu(w), nonnegativity within 2^-t.
MartingaleReport verify_martingale(const Martingale& d, const ProbMeasure& nu, std::size_t depth,
                                   unsigned tolerance_bits = 40);

struct PrefixSumBound {
  Rational lhs;    // sum over w in A of d(w) nu(w)
  Rational bound;  // d(lambda)
  bool holds = false;
};

/// sum_{w in A} d(w) nu(w) <= d(lambda), exactly.
PrefixSumBound prefix_sum_bound(const Martingale& d, const PrefixSet& set, const ProbMeasure& nu);

/// Finite witness for (or refutation of) d reaching 1 along a prefix of w.
struct CoverageCertificate {
  BitString subject;
  bool covered = false;
  BitString witness;     // shortest prefix with d >= 1, when covered
  Rational value;        // d(witness), when covered
  std::size_t depth = 0; // refutation depth |subject|, when not covered
};

/// Scans the prefixes of w (shortest first) for a value >= 1. Exact only.
CoverageCertificate covers(const Martingale& d, const BitString& w);

/// The clopen set of length-n strings having a prefix v with d(v) >= 1.
ClopenSet coverage_set(const Martingale& d, std::size_t n);

}  // namespace rbm
