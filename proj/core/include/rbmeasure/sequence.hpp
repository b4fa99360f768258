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
#include <string>

#include "rbmeasure/splitting.hpp"

namespace rbm {

enum class Monotonicity { kUnion, kIntersection };

/// An indexed family of measurements with a modulus of convergence.
///
/// stage(k) measures the k-th stage set (for union families the union of the
/// first k + 1 sets). For every k >= modulus(t, r, d, w),
/// |stage(k).apply(r, d).plus(w) - limit(w)| <= 2^-t.
struct ModulatedFamily {
  using Stage = std::function<SplittingOp(std::size_t k)>;
  using Modulus =
      std::function<std::size_t(unsigned t, unsigned r, const Martingale& d, const BitString& w)>;

  std::string name;
  ProbMeasure nu;
  Stage stage;
  Modulus modulus;
  Monotonicity direction = Monotonicity::kUnion;
  /// All stages coincide; the limit is stage(0) and evaluation is exact.
  bool stationary = false;
};

/// Modulus for families whose stages split Lambda(d) exactly: the least k
/// with stage(k).minus(w) <= 2^-t (union direction), searched up to `cap`.
/// Exhausting the cap throws EvaluationError.
ModulatedFamily::Modulus residual_modulus(ModulatedFamily::Stage stage, std::size_t cap = 256);

/// X_k = C_{0^k 1}; stage k measures the union over j <= k, whose limit is
/// the complement of {0^infinity}.
ModulatedFamily spine_family(const ProbMeasure& nu);

/// Every stage is `op`; modulus identically 0.
ModulatedFamily constant_family(const SplittingOp& op,
                                Monotonicity direction = Monotonicity::kUnion);

/// The family with each stage complemented and the direction flipped.
ModulatedFamily complemented(const ModulatedFamily& family);

/// Union of a union-monotone family: Theta+_r(d)(w) is the limit stage
/// evaluated at the caller's precision (inexact unless stationary);
/// Theta-_r(d) = stage(m).minus at r + 1 with m = modulus(r + 1, r + 1, d, lambda).
SplittingOp sequence_union(const ModulatedFamily& family);

/// Intersection of an intersection-monotone family via the complemented
/// union: complement(sequence_union(complemented(family))).
SplittingOp sequence_intersection(const ModulatedFamily& family);

/// Given measurements of null sets X_j (j < count), the union-monotone family
/// Psi_{k,r}(d) = (sum_{j<=k} Phi_j+_{j+r+1}(1), d) with the analytic modulus
/// max(0, t + l(|w|) - r - 1). Each summand is checked to satisfy
/// Phi_j+_{j+r+1}(1)(lambda) <= 2^-(j+r+1) when it is built; a violation
/// throws EvaluationError. count = 0 gives the empty family.
ModulatedFamily null_sequence_union(std::string name, const ProbMeasure& nu,
                                    std::function<SplittingOp(std::size_t j)> members,
                                    std::size_t count = static_cast<std::size_t>(-1));

}  // namespace rbm
