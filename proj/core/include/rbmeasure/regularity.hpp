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
#include <string>
#include <vector>

#include "rbmeasure/martingale.hpp"

namespace rbm {

/// m_alpha(s, t) = alpha s + (1 - alpha) t.
Rational weighted_average(const Rational& alpha, const Rational& s, const Rational& t);

/// (s, t) in D_alpha: both coordinates nonnegative, or m_alpha(s, t) >= 1.
bool in_robin_hood_domain(const Rational& alpha, const Rational& s, const Rational& t);

struct RobinHoodResult {
  Rational s;
  Rational t;
  int clause = 0;  // 1..4, the clause that fired
};

/// The Robin Hood function rh_alpha for alpha in (0, 1). Clauses are tried in
/// order: identity on [0,1]^2, equalize on the half-plane m_alpha >= 1, then
/// cap the richer coordinate at 1 and hand the excess to the poorer one.
/// Throws PreconditionError outside D_alpha or for alpha outside (0, 1).
RobinHoodResult robin_hood(const Rational& alpha, const Rational& s, const Rational& t);

/// The regularization Lambda(d) over nu. Requires an exact d. Evaluation of
/// Lambda(d)(w) walks the root-to-w path once; results are memoized.
Martingale regularize(const Martingale& d, const ProbMeasure& nu);

struct RegularityReport {
  bool ok = true;
  std::size_t pairs_checked = 0;
  std::vector<std::string> failures;
};

/// d(v) >= 1 implies d(w) >= 1 for every v prefix of w, |w| <= depth.
RegularityReport check_regularity(const Martingale& d, std::size_t depth);

/// If some nu-positive prefix v of w has d(v) >= 1 then lambda_d(w) >= 1, for
/// every |w| <= depth.
RegularityReport check_success_containment(const Martingale& d, const Martingale& lambda_d,
                                           const ProbMeasure& nu, std::size_t depth);

}  // namespace rbm
