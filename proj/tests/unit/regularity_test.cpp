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

#include "rbmeasure/harness.hpp"
#include "rbmeasure/nullcover.hpp"
#include "rbmeasure/regularity.hpp"
#include "test_support.hpp"

namespace rbm {
namespace {

using testing::B;
using testing::Q;

TEST(RobinHood, FixesTheUnitSquare) {
  const RobinHoodResult r = robin_hood(Q("1/2"), Q("1/2"), Q("1/2"));
  EXPECT_EQ(r.s, Q("1/2"));
  EXPECT_EQ(r.t, Q("1/2"));
  EXPECT_EQ(r.clause, 1);
}

TEST(RobinHood, EqualizesAboveTheLine) {
  // m = 1/2 * 3/2 + 1/2 * 3/4 = 9/8
  const RobinHoodResult r = robin_hood(Q("1/2"), Q("3/2"), Q("3/4"));
  EXPECT_EQ(r.s, Q("9/8"));
  EXPECT_EQ(r.t, Q("9/8"));
  EXPECT_EQ(r.clause, 2);
}

TEST(RobinHood, CapsTheRicherCoordinate) {
  // m = 7/8 < 1 and s >= 1: s -> 1, t absorbs the excess.
  const RobinHoodResult r = robin_hood(Q("1/2"), Q("3/2"), Q("1/4"));
  EXPECT_EQ(r.s, Rational(1));
  EXPECT_EQ(r.t, Q("3/4"));
  EXPECT_EQ(r.clause, 3);
  EXPECT_EQ(weighted_average(Q("1/2"), r.s, r.t), Q("7/8"));
}

TEST(RobinHood, MirrorClause) {
  const RobinHoodResult r = robin_hood(Q("1/4"), Q("1/2"), Q("7/6"));
  // m = 1/8 + 7/8 = 1, so the equalizing clause fires.
  EXPECT_EQ(r.clause, 2);
  const RobinHoodResult q = robin_hood(Q("1/4"), Q("0"), Q("9/8"));
  // m = 27/32 < 1, t >= 1: t -> 1, s = (27/32 - 3/4) / (1/4) = 3/8
  EXPECT_EQ(q.t, Rational(1));
  EXPECT_EQ(q.s, Q("3/8"));
  EXPECT_EQ(q.clause, 4);
}

TEST(RobinHood, RejectsOutsideDomain) {
  EXPECT_FALSE(in_robin_hood_domain(Q("1/2"), Q("-1/2"), Q("1/4")));
  EXPECT_TRUE(in_robin_hood_domain(Q("1/2"), Q("-1/2"), Q("3")));
  EXPECT_THROW(robin_hood(Q("1/2"), Q("-1/2"), Q("1/4")), PreconditionError);
  EXPECT_THROW(robin_hood(Rational(0), Q("1/2"), Q("1/2")), PreconditionError);
  EXPECT_THROW(robin_hood(Rational(1), Q("1/2"), Q("1/2")), PreconditionError);
}

TEST(RobinHoodProperty, InvariantsOnRandomArguments) {
  std::mt19937_64 rng = testing::rng_for(30);
  int tested = 0;
  while (tested < 10000) {
    const Rational alpha(1 + static_cast<long>(rng() % 255), 256);
    const Rational s = random_dyadic(rng, 3, 6) - Rational(static_cast<long>(rng() % 2));
    const Rational t = random_dyadic(rng, 3, 6) - Rational(static_cast<long>(rng() % 2));
    if (!in_robin_hood_domain(alpha, s, t)) continue;
    ++tested;
    const RobinHoodResult r = robin_hood(alpha, s, t);
    const Rational m = weighted_average(alpha, s, t);
    ASSERT_EQ(weighted_average(alpha, r.s, r.t), m) << alpha << " " << s << " " << t;
    ASSERT_GE(r.s, Rational(0));
    ASSERT_GE(r.t, Rational(0));
    if (m >= Rational(1)) {
      ASSERT_GE(r.s, Rational(1));
      ASSERT_GE(r.t, Rational(1));
    }
    if (s >= Rational(0) && s <= Rational(1) && t >= Rational(0) && t <= Rational(1)) {
      ASSERT_EQ(r.s, s);
      ASSERT_EQ(r.t, t);
    }
  }
}

TEST(Regularize, UnitIsFixed) {
  const Martingale ld = regularize(unit(), ProbMeasure());
  for_each_string_below(8, [&](const BitString& w) { ASSERT_EQ(ld(w), Rational(1)); });
}

TEST(Regularize, LiftsTiltedTableToOne) {
  const Martingale d = table({{BitString(), Rational(1)}, {B("0"), Q("3/2")}, {B("1"), Q("1/2")}});
  const Martingale ld = regularize(d, ProbMeasure());
  EXPECT_EQ(ld(B("0")), Rational(1));
  EXPECT_EQ(ld(B("1")), Rational(1));
}

TEST(Regularize, SecondLevelEqualization) {
  const Martingale d = table({{BitString(), Q("1/2")},
                              {B("0"), Rational(1)},
                              {B("1"), Rational(0)},
                              {B("00"), Rational(2)},
                              {B("01"), Rational(0)}});
  const Martingale ld = regularize(d, ProbMeasure());
  EXPECT_EQ(ld(B("00")), Rational(1));
  EXPECT_EQ(ld(B("01")), Rational(1));
  EXPECT_EQ(ld(BitString()), Q("1/2"));
  EXPECT_TRUE(verify_martingale(ld, ProbMeasure(), 6).ok);
}

TEST(RegularizeProperty, RandomMartingales) {
  std::mt19937_64 rng = testing::rng_for(31);
  for (const auto& [name, nu] : standard_measures()) {
    for (int i = 0; i < 30; ++i) {
      const Martingale d = random_martingale(nu, 6, rng);
      const Martingale ld = regularize(d, nu);
      ASSERT_EQ(ld(BitString()), d(BitString())) << name;
      ASSERT_TRUE(verify_martingale(ld, nu, 7).ok) << name;
      ASSERT_TRUE(check_regularity(ld, 7).ok) << name;
      ASSERT_TRUE(check_success_containment(d, ld, nu, 7).ok) << name;
    }
  }
}

TEST(Regularity, DetectsIrregularMartingale) {
  // The tilted table reaches 3/2 at "0" and stays there, so it is regular;
  // a table that drops below 1 after reaching it is not.
  const Martingale dropping = table({{BitString(), Rational(1)},
                                     {B("0"), Q("3/2")},
                                     {B("1"), Q("1/2")},
                                     {B("00"), Q("1/2")},
                                     {B("01"), Q("5/2")}});
  const RegularityReport rep = check_regularity(dropping, 3);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.failures.empty());
  EXPECT_TRUE(check_regularity(regularize(dropping, ProbMeasure()), 3).ok);
}

TEST(Regularize, RejectsInexactInput) {
  NullCover cover = z3_cover();
  cover.tail = nullptr;
  const Martingale inexact = null_cover_to_strong(cover);
  ASSERT_FALSE(inexact.exact());
  EXPECT_THROW(regularize(inexact, ProbMeasure())(BitString()), PreconditionError);
}

}  // namespace
}  // namespace rbm
