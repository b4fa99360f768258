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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rbmeasure/cantor.hpp"
#include "rbmeasure/numerics.hpp"

namespace rbm {

enum class MeasureKind { kUniform, kCoinToss, kTable };

/// How a table measure answers queries deeper than its table.
enum class TableExtension {
  kNone,           // reject
  kProportional,   // nu(wb) = nu(w) / 2
};

/// Outcome of validate_table_measure: every violated constraint, in
/// standard-enumeration order of the offending node.
struct TableReport {
  bool valid = true;
  std::vector<std::string> violations;
};

/// A probability measure on Cantor space, evaluated exactly on cylinders.
///
/// Cheap to copy: the table payload is shared.
class ProbMeasure {
 public:
  /// The uniform (fair-coin) measure mu.
  ProbMeasure();

  static ProbMeasure uniform() { return ProbMeasure(); }

  /// Product measure where bit k is 1 with probability biases[k] for
  /// k < biases.size() and with probability `tail` afterwards.
  static ProbMeasure coin_toss(std::vector<Rational> biases, Rational tail);

  /// Explicit values on {0,1}^{<=depth}. Throws PreconditionError unless the
  /// table passes validate_table_measure.
  static ProbMeasure table(std::size_t depth, std::map<BitString, Rational> values,
                           TableExtension extension = TableExtension::kProportional);

  MeasureKind kind() const { return kind_; }
  /// Uniform and coin-toss measures are products of independent bits.
  bool is_product() const { return kind_ != MeasureKind::kTable; }

  /// nu(w) = nu(C_w).
  Rational measure_of(const BitString& w) const;
  bool is_null(const BitString& w) const { return measure_of(w).is_zero(); }

  /// nu(v | w): 1 if v is a prefix of w, nu(v)/nu(w) if w is a prefix of v,
  /// 0 otherwise. Requires nu(w) > 0.
  Rational conditional(const BitString& v, const BitString& w) const;

  /// nu(w0 | w). Requires nu(w) > 0.
  Rational zero_fraction(const BitString& w) const;

  /// Probability that bit k is 1 (coin-toss and uniform only).
  Rational bias(std::size_t k) const;

  /// l(n) such that nu(w) = 0 or nu(w) >= 2^-l(|w|) for every |w| = n.
  /// Least such l for uniform and table measures; for coin-toss measures the
  /// sum of per-bit bounds ceil(log2(1/min positive factor)), which is least
  /// when all biases are dyadic.
  unsigned long positivity_bits(std::size_t n) const;

  /// Short human-readable description, e.g. "coin_toss[1/4,1/2;3/4]".
  std::string describe() const;

  const std::vector<Rational>& biases() const { return biases_; }
  const Rational& tail() const { return tail_; }
  std::size_t table_depth() const { return table_depth_; }
  TableExtension extension() const { return extension_; }
  /// Table entries (empty for non-table measures).
  const std::map<BitString, Rational>& table_values() const;

 private:
  MeasureKind kind_ = MeasureKind::kUniform;
  std::vector<Rational> biases_;
  Rational tail_ = Rational(1, 2);
  std::vector<Rational> zero_odds_;      // 1 - biases_[k]
  Rational tail_zero_odds_ = Rational(1, 2);
  std::size_t table_depth_ = 0;
  TableExtension extension_ = TableExtension::kProportional;
  std::shared_ptr<const std::map<BitString, Rational>> table_;
};

/// Exact check of nu(lambda) = 1, nonnegativity, completeness of the table to
/// `depth`, and nu(w) = nu(w0) + nu(w1) at every interior node.
TableReport validate_table_measure(std::size_t depth,
                                   const std::map<BitString, Rational>& values);

/// The measure that puts 1/2 on 0^+ and on 1^+ and 0 elsewhere below depth
/// `depth`, as a table. Useful as a source of null cylinders.
ProbMeasure two_spine_measure(std::size_t depth);

}  // namespace rbm
