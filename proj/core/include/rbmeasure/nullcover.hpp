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

#include <functional>
#include <optional>
#include <string>

#include "rbmeasure/splitting.hpp"

namespace rbm {

/// A family r -> d_r of martingales with d_r(lambda) <= 2^-r.
struct NullCover {
  std::string name;
  ProbMeasure nu;
  std::function<Martingale(unsigned r)> member;
  /// Every member is regular.
  bool regular = false;
  /// Optional closed form of sum_{r >= from} d_r(w), used for exact sums.
  std::function<std::optional<Rational>(const BitString& w, unsigned from)> tail;
};

/// A family r -> (d+_r, d-_r) with d+_r(lambda) + d-_r(lambda) <= 1 + 2^-r.
struct Bicover {
  std::string name;
  std::function<Martingale(unsigned r)> plus;
  std::function<Martingale(unsigned r)> minus;
};

/// d_r = z3_ladder(r, nu), a regular cover of {0^infinity} when
/// nu(0^{r+1}) <= 2^-r (e.g. the uniform measure). The tail has a closed
/// form for uniform and coin-toss measures.
NullCover z3_cover(const ProbMeasure& nu = ProbMeasure::uniform());

/// Replaces every member by its regularization; the result is regular.
NullCover regularize_cover(const NullCover& cover);

/// Checks d_r(lambda) <= 2^-r exactly (or by an approximation upper bound)
/// for every r <= max_r. Returns the first offending r, if any.
std::optional<unsigned> check_null_cover(const NullCover& cover, unsigned max_r);

/// d(w) = sum_r d_r(w) when nu(w) > 0, |w| when nu(w) = 0. Exact when the
/// cover has a tail closed form and exact members; otherwise evaluation at
/// precision t truncates at R = t + l(|w|) + 1. Requires a regular cover.
Martingale null_cover_to_strong(const NullCover& cover);

/// The exact partial sum d_0 + ... + d_R (a martingale in its own right).
Martingale null_cover_truncation(const NullCover& cover, unsigned big_r);

/// (r, d') -> ((2^-r / (1 + d(lambda))) d, d'). Requires d exact at lambda.
SplittingOp success_to_measurement(const Martingale& d, const ProbMeasure& nu);

/// r -> Phi+_r(1). Checks the estimate bound eagerly for r <= eager_check_bits
/// (PreconditionError) and again whenever a member is built (EvaluationError).
NullCover measurement_to_nullcover(const SplittingOp& op, unsigned eager_check_bits = 16);

/// r -> (Phi+_r(1), Phi-_r(1)).
Bicover bicover_from_measurement(const SplittingOp& op);

/// Checks d+_r(lambda) + d-_r(lambda) <= 1 + 2^-r for r <= max_r. Returns the
/// first offending r, if any.
std::optional<unsigned> check_bicover(const Bicover& bicover, unsigned max_r);

}  // namespace rbm
