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
#include <set>
#include <string>
#include <vector>

#include "rbmeasure/cantor.hpp"
#include "rbmeasure/measure.hpp"
#include "test_support.hpp"

namespace rbm {
namespace {

using testing::B;
using testing::Q;

TEST(Enumeration, WorkedIndices) {
  EXPECT_EQ(BitString::from_index(0), BitString());
  EXPECT_EQ(BitString::from_index(3), B("00"));
  EXPECT_EQ(BitString::from_index(6), B("11"));
  EXPECT_EQ(BitString::from_index(7), B("000"));
}

TEST(Enumeration, MatchesOracleAndRoundTrips) {
  for (std::uint64_t k = 0; k < 5000; ++k) {
    const BitString w = BitString::from_index(k);
    ASSERT_EQ(w.to_string(), testing::enumeration_oracle(k)) << k;
    ASSERT_EQ(w.index(), k);
  }
}

TEST(Enumeration, OrderIsLengthThenLexicographic) {
  std::vector<BitString> seen;
  for_each_string_below(5, [&](const BitString& w) { seen.push_back(w); });
  ASSERT_EQ(seen.size(), 31U);
  for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i].index(), i);
  for (std::size_t i = 1; i < seen.size(); ++i) EXPECT_LT(seen[i - 1], seen[i]);
}

TEST(BitString, ParsingAndAccessors) {
  EXPECT_EQ(B("λ"), BitString());
  EXPECT_EQ(BitString().display(), "λ");
  EXPECT_THROW(B("012"), PreconditionError);
  const BitString w = B("01101");
  EXPECT_EQ(w.size(), 5U);
  EXPECT_EQ(w[1], 1);
  EXPECT_EQ(w.prefix(3), B("011"));
  EXPECT_EQ(w.slice(1, 3), B("110"));
  EXPECT_EQ(w.child(0), B("011010"));
  EXPECT_EQ(w.parent(), B("0110"));
  EXPECT_EQ(w.value(), 13U);
  EXPECT_EQ(BitString::from_value(13, 6), B("001101"));
  EXPECT_TRUE(B("01").is_prefix_of(w));
  EXPECT_FALSE(B("1").is_prefix_of(w));
  EXPECT_TRUE(BitString().is_prefix_of(w));
  EXPECT_TRUE(w.comparable(B("011")));
  EXPECT_FALSE(w.comparable(B("00")));
}

TEST(PrefixSet, Examples) {
  EXPECT_TRUE(is_prefix_set({B("0"), B("1")}));
  EXPECT_FALSE(is_prefix_set({B("0"), B("01")}));
  EXPECT_TRUE(is_prefix_set({}));
  EXPECT_THROW(PrefixSet({B("0"), B("01")}), PreconditionError);
  EXPECT_EQ(PrefixSet({B("0"), B("101")}).max_length(), 3U);
  EXPECT_EQ(PrefixSet().max_length(), 0U);
}

TEST(ClopenSet, Examples) {
  EXPECT_EQ(ClopenSet::cylinder(B("0")).complement(), ClopenSet::cylinder(B("1")));
  EXPECT_EQ(set_union(ClopenSet::cylinder(B("00")), ClopenSet::cylinder(B("01"))),
            ClopenSet::cylinder(B("0")));
  EXPECT_EQ(set_intersection(ClopenSet::cylinder(B("0")), ClopenSet::cylinder(B("01"))),
            ClopenSet::cylinder(B("01")));
  EXPECT_TRUE(ClopenSet::cylinder(BitString()).is_full());
  EXPECT_TRUE(ClopenSet().is_empty());
  EXPECT_TRUE(ClopenSet::full().complement().is_empty());
}

TEST(ClopenSet, CanonicalFormMergesSiblings) {
  const ClopenSet x = ClopenSet::from_strings({B("000"), B("001"), B("01"), B("1")});
  EXPECT_TRUE(x.is_full());
  EXPECT_EQ(x.depth(), 0U);
  const ClopenSet y = ClopenSet::from_strings({B("10"), B("110"), B("111")});
  EXPECT_EQ(y, ClopenSet::cylinder(B("1")));
  EXPECT_EQ(y.to_string(), "1:[1]");
}

TEST(ClopenSet, CylinderQueries) {
  const ClopenSet x = ClopenSet::from_strings({B("01"), B("110")});
  EXPECT_TRUE(x.contains_cylinder(B("01")));
  EXPECT_TRUE(x.contains_cylinder(B("0110")));
  EXPECT_FALSE(x.contains_cylinder(B("0")));
  EXPECT_TRUE(x.disjoint_from_cylinder(B("00")));
  EXPECT_TRUE(x.disjoint_from_cylinder(B("111")));
  EXPECT_FALSE(x.disjoint_from_cylinder(B("11")));
}

TEST(ClassicalMeasure, Examples) {
  const ProbMeasure mu;
  const ProbMeasure quarter = ProbMeasure::coin_toss({}, Q("1/4"));
  EXPECT_EQ(classical_measure(PrefixSet({B("0"), B("1")}), mu), Rational(1));
  EXPECT_EQ(classical_measure(PrefixSet({B("01")}), mu), Q("1/4"));
  // bias(0) * (1 - bias(1)) = 1/4 * 3/4
  EXPECT_EQ(classical_measure(PrefixSet({B("10")}), quarter), Q("3/16"));
  EXPECT_EQ(classical_measure(ClopenSet::cylinder(B("10")), quarter), Q("3/16"));
}

// Membership oracle: a length-n string lies in a clopen set iff its prefix
// at the set's depth is selected.
std::set<std::string> members_at(const ClopenSet& x, std::size_t n) {
  std::set<std::string> out;
  for (const BitString& w : x.selected_at(n)) out.insert(w.to_string());
  return out;
}

ClopenSet random_set(std::mt19937_64& rng, std::size_t depth) {
  std::vector<BitString> selected;
  for_each_string_of_length(depth, [&](const BitString& w) {
    if (rng() & 1U) selected.push_back(w);
  });
  return ClopenSet::from_selection(depth, selected);
}

TEST(ClopenSetProperty, BooleanAlgebraAgainstMembershipOracle) {
  std::mt19937_64 rng = testing::rng_for(10);
  constexpr std::size_t kN = 7;
  for (int i = 0; i < 200; ++i) {
    const ClopenSet a = random_set(rng, rng() % 6);
    const ClopenSet b = random_set(rng, rng() % 6);
    const std::set<std::string> ma = members_at(a, kN);
    const std::set<std::string> mb = members_at(b, kN);
    const std::set<std::string> mu = members_at(set_union(a, b), kN);
    const std::set<std::string> mi = members_at(set_intersection(a, b), kN);
    const std::set<std::string> md = members_at(set_difference(a, b), kN);
    const std::set<std::string> mc = members_at(a.complement(), kN);
    for_each_string_of_length(kN, [&](const BitString& w) {
      const std::string s = w.to_string();
      const bool in_a = ma.count(s) > 0;
      const bool in_b = mb.count(s) > 0;
      ASSERT_EQ(mu.count(s) > 0, in_a || in_b);
      ASSERT_EQ(mi.count(s) > 0, in_a && in_b);
      ASSERT_EQ(md.count(s) > 0, in_a && !in_b);
      ASSERT_EQ(mc.count(s) > 0, !in_a);
    });
    ASSERT_EQ(set_union(a, b).complement(),
              set_intersection(a.complement(), b.complement()));
    ASSERT_EQ(a.complement().complement(), a);
  }
}

TEST(ClopenSetProperty, MinimalPrefixSetRegeneratesTheSet) {
  std::mt19937_64 rng = testing::rng_for(11);
  const ProbMeasure mu;
  for (int i = 0; i < 200; ++i) {
    const ClopenSet x = random_set(rng, rng() % 7);
    const PrefixSet p = x.minimal_prefix_set();
    ASSERT_TRUE(is_prefix_set(p.members()));
    ASSERT_EQ(ClopenSet::from_strings(p.members()), x);
    ASSERT_EQ(classical_measure(p, mu), classical_measure(x, mu));
    // Oracle: each selected cell of depth n weighs 2^-n.
    ASSERT_EQ(classical_measure(x, mu),
              Rational(static_cast<long>(x.selected().size())) *
                  Rational::pow2(-static_cast<long>(x.depth())));
  }
}

TEST(ClopenSet, RejectsTooDeepBitmaps) {
  EXPECT_THROW(ClopenSet::cylinder(BitString::zeros(ClopenSet::kMaxDepth + 1)),
               PreconditionError);
}

}  // namespace
}  // namespace rbm
