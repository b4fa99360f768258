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

#include <random>
#include <vector>

#include "rbmeasure/harness.hpp"
#include "rbmeasure/nullcover.hpp"
#include "rbmeasure/splitting.hpp"
#include "test_support.hpp"

namespace rbm {
namespace {

using testing::B;
using testing::eps;
using testing::Q;

TEST(CylinderMeasurement, PositiveCylinderSplitsUnit) {
  const SplittingOp phi = cylinder_measurement(B("0"), ProbMeasure());
  const SplitPair p = phi.apply(5, unit());
  EXPECT_EQ(p.plus(BitString()), Q("1/2"));
  EXPECT_EQ(p.plus(B("0")), Rational(1));
  EXPECT_EQ(p.plus(B("1")), Rational(0));
  EXPECT_EQ(p.minus(BitString()), Q("1/2"));
  EXPECT_EQ(p.minus(B("1")), Rational(1));
  ASSERT_TRUE(phi.target().has_value());
  ASSERT_TRUE(phi.target()->clopen.has_value());
  EXPECT_EQ(*phi.target()->clopen, ClopenSet::cylinder(B("0")));
  EXPECT_TRUE(verify_splitting(phi, unit(), 4, 6).ok());
}

TEST(CylinderMeasurement, FullCylinderEstimatesOne) {
  for (const auto& [name, nu] : standard_measures()) {
    const SplittingOp phi = cylinder_measurement(BitString(), nu);
    for (unsigned r : {1U, 6U, 20U}) {
      EXPECT_EQ(phi.apply(r, unit()).plus(BitString()), Rational(1)) << name;
    }
  }
}

TEST(CylinderMeasurement, NullCylinderUsesIndicator) {
  const ProbMeasure nu = two_spine_measure(6);
  const SplittingOp phi = cylinder_measurement(B("01"), nu);
  const Martingale d = random_martingale(nu, 6, std::uint64_t{3});
  const SplitPair p = phi.apply(4, d);
  for_each_string_below(7, [&](const BitString& v) {
    ASSERT_EQ(p.plus(v), B("01").is_prefix_of(v) ? Rational(1) : Rational(0)) << v;
    ASSERT_EQ(p.minus(v), d(v)) << v;
  });
  const MeasureEstimate est = measure_estimate(phi, 8);
  EXPECT_EQ(est.plus_value, Rational(0));
  EXPECT_EQ(est.upper, Rational(0));
  EXPECT_EQ(est.lower, Rational(0));
}

TEST(CylinderMeasurementProperty, EstimateIsExactMeasureAtEveryPrecision) {
  for (const auto& [name, nu] : standard_measures()) {
    for_each_string_below(5, [&](const BitString& w) {
      const SplittingOp phi = cylinder_measurement(w, nu);
      for (unsigned r : {1U, 4U, 9U, 17U}) {
        ASSERT_EQ(phi.apply(r, unit()).plus(BitString()), nu.measure_of(w)) << name << " " << w;
      }
    });
  }
}

TEST(CylinderPlus, MatchesDisplayedFormula) {
  const ProbMeasure quarter = ProbMeasure::coin_toss({}, Q("1/4"));
  const Martingale big_d = random_martingale(quarter, 5, std::uint64_t{9});
  const BitString w = B("10");
  const Martingale plus = cylinder_plus(w, quarter, big_d);
  for_each_string_below(6, [&](const BitString& v) {
    Rational expected(0);
    if (v.is_prefix_of(w)) {
      expected = big_d(w) * quarter.measure_of(w) / quarter.measure_of(v);
    } else if (w.is_prefix_of(v)) {
      expected = big_d(v);
    }
    ASSERT_EQ(plus(v), expected) << v;
  });
}

TEST(MeasureEstimate, CylinderAndFullSpace) {
  const ProbMeasure mu;
  const MeasureEstimate c = measure_estimate(cylinder_measurement(B("01"), mu), 10);
  EXPECT_EQ(c.lower, Q("1/4") - eps(10));
  EXPECT_EQ(c.upper, Q("1/4"));
  EXPECT_TRUE(c.exact);
  EXPECT_TRUE(c.consistent);
  for (unsigned r : {1U, 5U, 12U}) {
    const MeasureEstimate f = measure_estimate(cylinder_measurement(BitString(), mu), r);
    EXPECT_EQ(f.lower, Rational(1) - eps(r));
    EXPECT_EQ(f.upper, Rational(1));
  }
}

TEST(Complement, SwapsOutputsAndTarget) {
  const ProbMeasure mu;
  const SplittingOp phi = cylinder_measurement(B("0"), mu);
  const SplittingOp psi = complement(phi);
  EXPECT_EQ(measure_estimate(psi, 8).upper, Q("1/2"));
  EXPECT_EQ(*psi.target()->clopen, ClopenSet::cylinder(B("1")));
  EXPECT_EQ(measure_estimate(complement(cylinder_measurement(BitString(), mu)), 8).upper,
            Rational(0));
  EXPECT_TRUE(verify_splitting(psi, unit(), 4, 6).ok());

  const SplittingOp back = complement(psi);
  std::mt19937_64 rng = testing::rng_for(40);
  for (int i = 0; i < 20; ++i) {
    const Martingale d = random_martingale(mu, 5, rng);
    const unsigned r = 1 + static_cast<unsigned>(rng() % 8);
    const SplitPair a = phi.apply(r, d);
    const SplitPair b = back.apply(r, d);
    const BitString w = random_string(rng, rng() % 7);
    ASSERT_EQ(a.plus(w), b.plus(w));
    ASSERT_EQ(a.minus(w), b.minus(w));
  }
}

TEST(BrokenOperator, FailsTheBudgetCondition) {
  const SplittingOp broken = broken_operator(ProbMeasure());
  const SplitReport rep = verify_splitting(broken, unit(), 1, 3);
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.budget, CheckStatus::kFail);
  // 1 + 1/2 - 1 - 1
  EXPECT_EQ(rep.budget_slack, Q("-1/2"));
}

TEST(CombinePair, SiblingUnionCoversEverything) {
  const ProbMeasure mu;
  const CombinedMeasurements c =
      combine_pair(cylinder_measurement(B("0"), mu), cylinder_measurement(B("1"), mu));
  for (unsigned r : {2U, 6U, 10U}) {
    const MeasureEstimate u = measure_estimate(c.union_, r);
    EXPECT_LE(u.lower, Rational(1));
    EXPECT_EQ(u.upper, Rational(1));
    EXPECT_LE(abs(u.plus_value - Rational(1)), eps(r));
    const Rational total = u.plus_value + u.minus_value;
    EXPECT_GE(total, Rational(1));
    EXPECT_LE(total, Rational(1) + eps(r));
  }
}

TEST(CombinePair, IntersectionIsIdempotent) {
  const ProbMeasure mu;
  const SplittingOp c0 = cylinder_measurement(B("0"), mu);
  const CombinedMeasurements c = combine_pair(c0, c0);
  for (unsigned r : {2U, 6U, 10U}) {
    EXPECT_LE(abs(measure_estimate(c.intersection, r).plus_value - Q("1/2")), eps(r));
  }
}

TEST(CombinePair, InclusionExclusionForNestedCylinders) {
  const ProbMeasure mu;
  const CombinedMeasurements c =
      combine_pair(cylinder_measurement(B("0"), mu), cylinder_measurement(B("01"), mu));
  for (unsigned r : {4U, 8U, 16U}) {
    const Rational u = measure_estimate(c.union_, r).plus_value;
    const Rational i = measure_estimate(c.intersection, r).plus_value;
    const Rational x = measure_estimate(c.x, r).plus_value;
    const Rational y = measure_estimate(c.y, r).plus_value;
    EXPECT_LE(abs(u + i - x - y), Rational(2) * eps(r));
    EXPECT_LE(abs(u - Q("1/2")), Rational(2) * eps(r));
    EXPECT_LE(abs(i - Q("1/4")), Rational(2) * eps(r));
  }
}

TEST(CombinePair, OutputsSatisfySplittingConditions) {
  const ProbMeasure mixed = ProbMeasure::coin_toss({Q("1/4"), Q("1/2")}, Q("3/4"));
  const CombinedMeasurements c = combine_pair(cylinder_measurement(B("01"), mixed),
                                              clopen_measurement(
                                                  ClopenSet::from_strings({B("00"), B("11")}), mixed));
  std::mt19937_64 rng = testing::rng_for(41);
  for (const SplittingOp* op : {&c.x, &c.y, &c.intersection, &c.union_}) {
    for (int i = 0; i < 3; ++i) {
      const Martingale d = random_martingale(mixed, 4, rng);
      const SplitReport rep = verify_splitting(*op, d, 3, 5);
      ASSERT_TRUE(rep.ok()) << op->provenance();
    }
  }
}

TEST(CombinePair, RejectsMismatchedMeasures) {
  EXPECT_THROW(combine_pair(cylinder_measurement(B("0"), ProbMeasure()),
                            cylinder_measurement(B("0"), ProbMeasure::coin_toss({}, Q("1/4")))),
               PreconditionError);
}

TEST(ClopenMeasurementProperty, AgreesWithClassicalMeasure) {
  std::mt19937_64 rng = testing::rng_for(42);
  for (const auto& [name, nu] : standard_measures()) {
    for (int i = 0; i < 40; ++i) {
      const ClopenSet x = random_clopen(rng, rng() % 7);
      const SplittingOp phi = clopen_measurement(x, nu);
      for (unsigned r : {3U, 9U}) {
        const MeasureEstimate est = measure_estimate(phi, r);
        const Rational truth = classical_measure(x, nu);
        ASSERT_LE(abs(est.plus_value - truth), Rational(2) * eps(r)) << name << " " << x.to_string();
        const Rational total = est.plus_value + est.minus_value;
        ASSERT_GE(total, Rational(1));
        ASSERT_LE(total, Rational(1) + eps(r));
      }
    }
  }
}

TEST(ClopenMeasurementProperty, RepresentationsAgree) {
  std::mt19937_64 rng = testing::rng_for(43);
  const ProbMeasure mu;
  for (int i = 0; i < 40; ++i) {
    const ClopenSet x = random_clopen(rng, 1 + rng() % 5);
    // The full selection at the canonical depth versus the minimal prefix set.
    const SplittingOp a = prefix_set_measurement(PrefixSet(x.selected()), mu);
    const SplittingOp b = clopen_measurement(x, mu);
    for (unsigned r : {4U, 8U}) {
      ASSERT_LE(abs(measure_estimate(a, r).plus_value - measure_estimate(b, r).plus_value),
                Rational(2) * eps(r));
    }
  }
}

TEST(Completeness, NullCylinderEstimatesZero) {
  const ProbMeasure nu = two_spine_measure(6);
  const SplittingOp op = completeness_measurement(cylinder_measurement(B("01"), nu));
  const MeasureEstimate est = measure_estimate(op, 6);
  EXPECT_EQ(est.lower, Rational(0));
  EXPECT_EQ(est.upper, Rational(0));
}

TEST(Completeness, NullSetFromStrongCoverEstimatesAtMostPrecision) {
  const SplittingOp psi = success_to_measurement(null_cover_to_strong(z3_cover()), ProbMeasure());
  const SplittingOp op = completeness_measurement(psi);
  for (unsigned r : {2U, 6U, 10U}) {
    const MeasureEstimate est = measure_estimate(op, r);
    EXPECT_EQ(est.lower, Rational(0));
    EXPECT_LE(est.upper, eps(r));
  }
}

TEST(Completeness, RejectsNonNullEvidence) {
  EXPECT_THROW(completeness_measurement(cylinder_measurement(BitString(), ProbMeasure())),
               PreconditionError);
}

TEST(StatusNames, AreStable) {
  EXPECT_EQ(to_string(CheckStatus::kPass), "pass");
  EXPECT_EQ(to_string(CheckStatus::kFail), "fail");
  EXPECT_EQ(to_string(CheckStatus::kUntestable), "untestable");
}

}  // namespace
}  // namespace rbm
