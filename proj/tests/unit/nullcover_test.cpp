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

#include "rbmeasure/nullcover.hpp"
#include "test_support.hpp"

namespace rbm {
namespace {

using testing::B;
using testing::eps;
using testing::Q;

TEST(StrongCover, RootValueIsOne) {
  const Martingale d = null_cover_to_strong(z3_cover());
  EXPECT_TRUE(d.exact());
  // sum_r 2^-(r+1) = 1
  EXPECT_EQ(d(BitString()), Rational(1));
}

TEST(StrongCover, SpineValuesCountSaturatedTerms) {
  const Martingale d = null_cover_to_strong(z3_cover());
  for (std::size_t n = 0; n <= 10; ++n) {
    // n saturated ladders plus the geometric tail 1.
    EXPECT_EQ(d(BitString::zeros(n)), Rational(static_cast<long>(n + 1))) << n;
  }
  EXPECT_TRUE(verify_martingale(d, ProbMeasure(), 8).ok);
}

TEST(StrongCover, OffSpineValuesMatchPartialSumOracle) {
  const Martingale d = null_cover_to_strong(z3_cover());
  // Off the spine, w = 0^k 1 v: ladders r < k are saturated (1 each) and
  // the rest vanish.
  for_each_string_below(8, [&](const BitString& w) {
    std::size_t k = 0;
    while (k < w.size() && w[k] == 0) ++k;
    if (k == w.size()) return;
    ASSERT_EQ(d(w), Rational(static_cast<long>(k))) << w;
  });
}

TEST(StrongCover, NullBranchReturnsLength) {
  NullCover cover;
  cover.name = "halves";
  cover.nu = two_spine_measure(8);
  cover.member = [](unsigned r) { return constant(Rational::pow2(-static_cast<long>(r) - 1)); };
  cover.regular = true;
  const Martingale d = null_cover_to_strong(cover);
  EXPECT_EQ(d.evaluate(B("01"), 10).value, Rational(2));
  EXPECT_EQ(d.evaluate(B("0110"), 10).value, Rational(4));
  EXPECT_LT(abs(d.evaluate(B("00"), 12).value - Rational(1)), eps(12));
}

TEST(StrongCover, RequiresRegularCover) {
  NullCover cover = z3_cover();
  cover.regular = false;
  EXPECT_THROW(null_cover_to_strong(cover), PreconditionError);
}

TEST(NullCover, Z3MembersMeetTheirBound) {
  EXPECT_EQ(check_null_cover(z3_cover(), 16), std::nullopt);
  EXPECT_EQ(check_null_cover(regularize_cover(z3_cover()), 8), std::nullopt);
  EXPECT_TRUE(regularize_cover(z3_cover()).regular);
}

TEST(NullCover, TruncationIsAPartialSum) {
  const Martingale t = null_cover_truncation(z3_cover(), 4);
  // sum_{r<=4} 2^-(r+1) = 31/32
  EXPECT_EQ(t(BitString()), Q("31/32"));
  EXPECT_EQ(t(B("000")), Rational(3) + Q("1/2") + Q("1/4"));
  EXPECT_TRUE(verify_martingale(t, ProbMeasure(), 8).ok);
}

TEST(SuccessToMeasurement, CoefficientHalvesPrecision) {
  const Martingale d = null_cover_to_strong(z3_cover());
  const SplittingOp op = success_to_measurement(d, ProbMeasure());
  for (unsigned r : {0U, 3U, 9U}) {
    const SplitPair p = op.apply(r, unit());
    // (2^-r / (1 + 1)) * d(lambda)
    EXPECT_EQ(p.plus(BitString()), eps(r + 1));
    EXPECT_EQ(p.minus(B("01")), Rational(1));
  }
  const MeasureEstimate est = measure_estimate(op, 4);
  EXPECT_EQ(est.lower, Rational(0));
  EXPECT_LE(est.upper, eps(4));
}

TEST(SuccessToMeasurement, ZeroMartingaleEstimatesZero) {
  const MeasureEstimate est = measure_estimate(success_to_measurement(zero(), ProbMeasure()), 4);
  EXPECT_EQ(est.plus_value, Rational(0));
  EXPECT_EQ(est.lower, Rational(0));
  EXPECT_EQ(est.upper, Rational(0));
}

TEST(MeasurementToNullCover, RoundTripFromStrongCover) {
  const SplittingOp op =
      success_to_measurement(null_cover_to_strong(z3_cover()), ProbMeasure());
  const NullCover cover = measurement_to_nullcover(op);
  EXPECT_EQ(check_null_cover(cover, 16), std::nullopt);
  for (unsigned r = 0; r <= 16; ++r) {
    EXPECT_LE(cover.member(r)(BitString()), eps(r)) << r;
  }
}

TEST(MeasurementToNullCover, NullCylinderGivesZeroCover) {
  const ProbMeasure nu = two_spine_measure(6);
  const NullCover cover = measurement_to_nullcover(cylinder_measurement(B("01"), nu));
  for (unsigned r = 0; r <= 8; ++r) EXPECT_EQ(cover.member(r)(BitString()), Rational(0));
}

TEST(MeasurementToNullCover, RejectsPositiveSet) {
  EXPECT_THROW(measurement_to_nullcover(cylinder_measurement(B("0"), ProbMeasure())),
               PreconditionError);
}

TEST(Bicover, CylinderHalves) {
  const Bicover b = bicover_from_measurement(cylinder_measurement(B("0"), ProbMeasure()));
  for (unsigned r : {0U, 4U, 12U}) {
    EXPECT_EQ(b.plus(r)(BitString()), Q("1/2"));
    EXPECT_EQ(b.minus(r)(BitString()), Q("1/2"));
  }
  EXPECT_EQ(check_bicover(b, 12), std::nullopt);
}

TEST(Bicover, FullSpace) {
  const Bicover b = bicover_from_measurement(cylinder_measurement(BitString(), ProbMeasure()));
  for (unsigned r : {0U, 4U, 12U}) {
    EXPECT_EQ(b.plus(r)(BitString()), Rational(1));
    EXPECT_EQ(b.minus(r)(BitString()), Rational(0));
  }
}

TEST(Bicover, CombinedSiblingUnionRespectsBudget) {
  const ProbMeasure mu;
  const CombinedMeasurements c =
      combine_pair(cylinder_measurement(B("0"), mu), cylinder_measurement(B("1"), mu));
  const Bicover b = bicover_from_measurement(c.union_);
  EXPECT_EQ(check_bicover(b, 10), std::nullopt);
  for (unsigned r : {1U, 5U, 10U}) {
    const Rational p = b.plus(r)(BitString());
    EXPECT_GE(p + eps(r), Rational(1));
    EXPECT_LE(p, Rational(1) + eps(r));
  }
}

TEST(Bicover, DetectsOverspending) {
  const Bicover b = bicover_from_measurement(broken_operator(ProbMeasure()));
  // At r = 0 the budget 1 + 2^0 still covers 1 + 1.
  EXPECT_EQ(check_bicover(b, 4), std::optional<unsigned>(1));
}

}  // namespace
}  // namespace rbm
