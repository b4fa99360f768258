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


#include <gtest/gtest.h>

#include <vector>

#include "rbmeasure/nullcover.hpp"
#include "rbmeasure/sequence.hpp"
#include "test_support.hpp"

namespace rbm {
namespace {

using testing::B;
using testing::eps;
using testing::Q;

TEST(SpineFamily, DisjointUnionEstimatesOne) {
  const SplittingOp op = sequence_union(spine_family(ProbMeasure()));
  for (unsigned r : {4U, 8U, 16U}) {
    const MeasureEstimate est = measure_estimate(op, r);
    EXPECT_LE(abs(est.plus_value - Rational(1)), Rational(2) * eps(r)) << "r=" << r;
    EXPECT_LE(est.lower, Rational(1));
    EXPECT_GE(est.upper + Rational(2) * eps(r), Rational(1));
  }
}

TEST(SpineFamily, StagesAreMonotoneAndConvergeToPartialSums) {
  const ModulatedFamily f = spine_family(ProbMeasure());
  Rational previous(0);
  for (std::size_t k = 0; k < 12; ++k) {
    const Rational v = f.stage(k).apply(8, unit()).plus(BitString());
    // Oracle: sum_{j<=k} 2^-(j+1) = 1 - 2^-(k+1).
    EXPECT_EQ(v, Rational(1) - Rational::pow2(-static_cast<long>(k + 1)));
    EXPECT_GE(v, previous);
    previous = v;
  }
}

TEST(ResidualModulus, FindsLeastSufficientStage) {
  const ModulatedFamily f = spine_family(ProbMeasure());
  // Residual after stage k at lambda is 2^-(k+1).
  for (unsigned t = 0; t < 20; ++t) {
    const std::size_t k = f.modulus(t, 6, unit(), BitString());
    EXPECT_LE(f.stage(k).apply(6, unit()).minus(BitString()), eps(t));
    if (k > 0) {
      EXPECT_GT(f.stage(k - 1).apply(6, unit()).minus(BitString()), eps(t));
    }
  }
}

TEST(ResidualModulus, ThrowsWhenTheCapIsExhausted) {
  const ModulatedFamily::Modulus m = residual_modulus(
      [](std::size_t) { return cylinder_measurement(B("0"), ProbMeasure()); }, 16);
  EXPECT_THROW(m(4, 4, unit(), BitString()), EvaluationError);
}

TEST(ConstantFamily, UnionAndIntersectionOfOneSet) {
  const SplittingOp c0 = cylinder_measurement(B("0"), ProbMeasure());
  const SplittingOp u = sequence_union(constant_family(c0));
  const SplittingOp i = sequence_intersection(constant_family(c0, Monotonicity::kIntersection));
  for (unsigned r : {4U, 8U}) {
    EXPECT_LE(abs(measure_estimate(u, r).plus_value - Q("1/2")), eps(r));
    EXPECT_LE(abs(measure_estimate(i, r).plus_value - Q("1/2")), Rational(2) * eps(r));
  }
}

TEST(DeMorgan, IntersectionOfComplementsMatchesComplementOfUnion) {
  const SplittingOp via_intersection =
      sequence_intersection(complemented(spine_family(ProbMeasure())));
  const SplittingOp via_union = complement(sequence_union(spine_family(ProbMeasure())));
  for (unsigned r : {4U, 8U, 12U}) {
    const Rational a = measure_estimate(via_intersection, r).plus_value;
    const Rational b = measure_estimate(via_union, r).plus_value;
    // The complement of the spine union is the single point 0^infinity.
    EXPECT_LE(abs(a - b), Rational(2) * eps(r));
    EXPECT_LE(a, Rational(2) * eps(r));
  }
}

TEST(NullSequenceUnion, NullCylindersGiveZero) {
  const ProbMeasure nu = two_spine_measure(10);
  const std::vector<BitString> nulls = {B("01"), B("10"), B("001"), B("110")};
  const ModulatedFamily f = null_sequence_union(
      "null cylinders", nu, [&](std::size_t j) { return cylinder_measurement(nulls[j], nu); },
      nulls.size());
  const SplittingOp op = sequence_union(f);
  for (unsigned r : {2U, 6U}) {
    const MeasureEstimate est = measure_estimate(op, r);
    EXPECT_EQ(est.lower, Rational(0));
    EXPECT_LE(est.upper, eps(r));
  }
}

TEST(NullSequenceUnion, StrongCoverMembersStayBelowPrecision) {
  const ProbMeasure mu;
  const SplittingOp shared = success_to_measurement(null_cover_to_strong(z3_cover()), mu);
  const ModulatedFamily f =
      null_sequence_union("strong covers", mu, [&](std::size_t) { return shared; }, 6);
  const SplittingOp op = sequence_union(f);
  for (unsigned r : {2U, 5U, 8U}) {
    const MeasureEstimate est = measure_estimate(op, r);
    EXPECT_EQ(est.lower, Rational(0));
    EXPECT_LE(est.upper, eps(r));
  }
}

TEST(NullSequenceUnion, RejectsNonNullMember) {
  const ProbMeasure mu;
  const ModulatedFamily f = null_sequence_union(
      "not null", mu, [&](std::size_t) { return cylinder_measurement(B("0"), mu); }, 2);
  EXPECT_THROW(measure_estimate(sequence_union(f), 4), EvaluationError);
}

TEST(NullSequenceUnion, EmptyFamilyIsZero) {
  const ProbMeasure mu;
  const ModulatedFamily f = null_sequence_union(
      "empty", mu, [&](std::size_t) { return cylinder_measurement(B("0"), mu); }, 0);
  EXPECT_EQ(measure_estimate(sequence_union(f), 4).upper, Rational(0));
}

}  // namespace
}  // namespace rbm
