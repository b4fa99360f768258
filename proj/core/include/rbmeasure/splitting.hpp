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
#include <optional>
#include <string>
#include <vector>

#include "rbmeasure/martingale.hpp"

namespace rbm {

struct SplitPair {
  Martingale plus;
  Martingale minus;
};

/// Finite description of the target pair (X+, X-) of a splitting operator.
///
/// plus_inner(n) and minus_inner(n) are clopen sets of depth <= n contained in
/// X+ and X- respectively; coverage is checked against them. When the target
/// is itself clopen, `clopen` holds X+ and the inner sets are exact.
struct SplitTarget {
  std::function<ClopenSet(std::size_t n)> plus_inner;
  std::function<ClopenSet(std::size_t n)> minus_inner;
  std::optional<ClopenSet> clopen;

  static SplitTarget of_clopen(const ClopenSet& x);
  SplitTarget swapped() const;
};

/// A splitting operator (r, d) -> (d+, d-) over a fixed measure.
class SplittingOp {
 public:
  using ApplyFn = std::function<SplitPair(unsigned r, const Martingale& d)>;

  SplittingOp(std::string provenance, ProbMeasure nu, ApplyFn apply,
              std::optional<SplitTarget> target = std::nullopt);

  SplitPair apply(unsigned r, const Martingale& d) const { return apply_(r, d); }
  const ProbMeasure& measure() const { return nu_; }
  const std::optional<SplitTarget>& target() const { return target_; }
  const std::string& provenance() const { return provenance_; }

 private:
  std::string provenance_;
  ProbMeasure nu_;
  ApplyFn apply_;
  std::optional<SplitTarget> target_;
};

/// The positive half of the cylinder split of D at w (nu(w) > 0):
/// D(w) nu(w) / nu(v) for v a prefix of w, D(v) for v extending w, else 0.
Martingale cylinder_plus(const BitString& w, const ProbMeasure& nu, const Martingale& big_d);

/// Measurement of the cylinder C_w. When nu(w) = 0 the positive side is the
/// indicator of C_w and the negative side is d. Otherwise both sides split
/// Lambda(d) and the operator ignores r.
SplittingOp cylinder_measurement(const BitString& w, const ProbMeasure& nu);

/// Measurement of the finite union of cylinders C_A, splitting Lambda(d)
/// across the nu-positive members and using indicators for null members.
SplittingOp prefix_set_measurement(const PrefixSet& set, const ProbMeasure& nu);

/// prefix_set_measurement of the minimal prefix set of x.
SplittingOp clopen_measurement(const ClopenSet& x, const ProbMeasure& nu);

/// Swaps the two outputs (and the target sides).
SplittingOp complement(const SplittingOp& op);

/// The four measurements derived from a pair by composing Theta[ab]_r(d) =
/// Psi^b_{r+2}(Phi^a_{r+1}(d)).
struct CombinedMeasurements {
  SplittingOp x;
  SplittingOp y;
  SplittingOp intersection;
  SplittingOp union_;
};

/// Requires both operators to use the same measure (compared by description).
CombinedMeasurements combine_pair(const SplittingOp& phi, const SplittingOp& psi);

/// Given a measurement of a null set Y (its estimate at r is <= 2^-r), the
/// operator (r, d) -> (Psi+_r(1), d), valid for any subset of Y. The evidence
/// is checked for r <= eager_check_bits at construction and again on apply.
SplittingOp completeness_measurement(const SplittingOp& psi, unsigned eager_check_bits = 8);

/// An operator that violates condition (iii): both sides are the unit
/// martingale. For fault-injection tests.
SplittingOp broken_operator(const ProbMeasure& nu);

struct MeasureEstimate {
  Rational lower;       // clamped to [0, 1]
  Rational upper;       // clamped to [0, 1]
  Rational plus_value;  // Phi+_r(1)(lambda) (or its approximation)
  Rational minus_value; // Phi-_r(1)(lambda) (or its approximation)
  bool exact = true;
  /// 1 - minus_value agrees with plus_value within 2^{1-r}.
  bool consistent = true;
};

/// [Phi+_r(1)(lambda) - 2^-r, Phi+_r(1)(lambda)] clamped to [0, 1]. Inexact
/// values are approximated at precision r + 4 and the interval widened by
/// the approximation error.
MeasureEstimate measure_estimate(const SplittingOp& op, unsigned r);

enum class CheckStatus { kPass, kFail, kUntestable };

std::string to_string(CheckStatus status);

struct SplitReport {
  CheckStatus budget = CheckStatus::kPass;         // condition (iii)
  CheckStatus cover_plus = CheckStatus::kPass;     // condition (i)
  CheckStatus cover_minus = CheckStatus::kPass;    // condition (ii)
  CheckStatus plus_identity = CheckStatus::kPass;  // d+ is a martingale
  CheckStatus minus_identity = CheckStatus::kPass; // d- is a martingale
  Rational budget_slack;  // d(lambda) + 2^-r - d+(lambda) - d-(lambda)
  std::vector<std::string> details;

  bool ok() const;
};

/// Checks condition (iii) at lambda (exactly, or with an approximation upper
/// bound for inexact outputs); coverage (i)/(ii) over every length-n string w
/// having a nu-positive prefix with d >= 1 and C_w inside the target side;
/// and the martingale identity of both outputs to depth n.
SplitReport verify_splitting(const SplittingOp& op, const Martingale& d, unsigned r,
                             std::size_t n);

}  // namespace rbm
