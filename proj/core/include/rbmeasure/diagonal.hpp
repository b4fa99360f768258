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
#include <optional>
#include <vector>

#include "rbmeasure/martingale.hpp"

namespace rbm {

struct TraceRow {
  BitString prefix;
  Rational value;             // d(prefix), exact when d is exact
  bool extends_w = false;     // prefix is w or extends it
  std::optional<Rational> bound;  // telescoping bound, for rows extending w
};

struct ConstructorTrace {
  BitString w;
  unsigned m = 0;
  BitString prefix;             // delta^k(lambda)
  std::vector<TraceRow> rows;   // delta^j(lambda) for j = 0..k
  Rational ceiling;             // 1 - 2^-m
  bool bounds_hold = true;      // every extending row obeys bound and ceiling
};

/// Runs the diagonalizing constructor delta for `steps` steps from lambda:
/// jump to w, then append the bit b minimizing the floor dyadic
/// approximation of d(xb) at precision |x| + m + 2 (ties go to 0).
/// Requires d(lambda) < nu(w) and d(w) < 1; m is the least positive integer
/// with d(w) <= 1 - 2^{1-m}.
ConstructorTrace conserve_constructor(const Martingale& d, const ProbMeasure& nu,
                                      const BitString& w, std::size_t steps);

/// Least (lexicographic) u of length m with d(u) <= d(lambda). With a measure,
/// only nu-positive u are eligible. Exact martingales only.
BitString find_light_leaf(const Martingale& d, std::size_t m,
                          const std::optional<ProbMeasure>& nu = std::nullopt);

struct ZeroOneContext {
  std::size_t m = 0;
  std::vector<BitString> light;  // I_m: d(w) < 1
  std::vector<BitString> heavy;  // J_m: d(w) >= 1
  BitString u;
};

struct ZeroOneResult {
  Martingale transformed;
  ZeroOneContext context;
  /// sum_{w in I_m} d(w) nu(w) + d(u) sum_{w in J_m} nu(w)
  Rational two_sum_bound;
  Rational initial_value;  // d'(lambda)
};

/// The zero-one-law transform: above depth m, d'(w) = d(u * w) when the
/// length-m root of w is in J_m and d(w) otherwise; below m, values are
/// back-solved by nu-weighted averaging. Requires a product measure and an
/// exact d (the construction assumes d regular).
ZeroOneResult zero_one_transform(const Martingale& d, const ProbMeasure& nu, std::size_t m);

}  // namespace rbm
