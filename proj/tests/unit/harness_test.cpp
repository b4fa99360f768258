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

#include <algorithm>
#include <random>
#include <string>

#include "rbmeasure/harness.hpp"
#include "test_support.hpp"

namespace rbm {
namespace {

using testing::B;
using testing::Q;

TEST(Generators, DrawsStayInRange) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_LE(draw_upto(rng, 7), 7U);
    const Rational x = random_dyadic(rng, 2, 5);
    ASSERT_GE(x, Rational(0));
    ASSERT_LE(x, Rational(2));
    // On the grid k / 32.
    ASSERT_EQ((x * Rational(32)).denominator(), 1);
    ASSERT_EQ(random_string(rng, 9).size(), 9U);
    const PrefixSet p = random_prefix_set(rng, 6);
    ASSERT_TRUE(is_prefix_set(p.members()));
    ASSERT_LE(p.max_length(), 6U);
  }
}

TEST(Generators, SameSeedSameOutput) {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    std::mt19937_64 a(seed);
    std::mt19937_64 b(seed);
    EXPECT_EQ(random_prefix_set(a, 7).members(), random_prefix_set(b, 7).members());
    EXPECT_EQ(random_clopen(a, 5), random_clopen(b, 5));
    const ProbMeasure mu;
    const Martingale da = random_martingale(mu, 6, seed);
    const Martingale db = random_martingale(mu, 6, seed);
    for_each_string_below(8, [&](const BitString& w) { ASSERT_EQ(da(w), db(w)); });
  }
}

TEST(Generators, StandardMeasures) {
  const auto measures = standard_measures();
  ASSERT_EQ(measures.size(), 3U);
  EXPECT_EQ(measures[0].second.describe(), "uniform");
  EXPECT_EQ(measures[1].second.measure_of(B("1")), Q("1/4"));
  EXPECT_EQ(measures[2].second.measure_of(B("101")), Q("3/32"));
}

TEST(ScanCount, MatchesClosedForm) {
  for (std::size_t n = 0; n <= 12; ++n) {
    EXPECT_EQ(exhaustive_scan_count(n), (std::size_t{1} << (n + 1)) - 1);
  }
}

TEST(SuiteConfig, ParsesKnownKeys) {
  const SuiteConfig cfg = SuiteConfig::from_json_text(
      R"({"seed": 5, "depth": 4, "pair_depth": 2, "samples": 3, "inject_fault": true,
          "suite": "cantor"})");
  EXPECT_EQ(cfg.seed, 5U);
  EXPECT_EQ(cfg.depth, 4U);
  EXPECT_EQ(cfg.pair_depth, 2U);
  EXPECT_EQ(cfg.samples, 3U);
  EXPECT_TRUE(cfg.inject_fault);
  EXPECT_EQ(cfg.suite, "cantor");
  const SuiteConfig defaults = SuiteConfig::from_json_text("{}");
  EXPECT_EQ(defaults.depth, 8U);
  EXPECT_EQ(defaults.suite, "default");
}

TEST(SuiteConfig, RejectsBadInput) {
  for (const char* bad : {R"({"sed": 1})", R"({"depth": 13})", R"({"pair_depth": 7})",
                          R"({"depth": -1})", R"({"inject_fault": 1})", R"([1, 2])",
                          R"({"seed": )", R"({"suite": 4})"}) {
    EXPECT_THROW(SuiteConfig::from_json_text(bad), PreconditionError) << bad;
  }
}

SuiteConfig small(const std::string& suite) {
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.depth = 5;
  cfg.pair_depth = 3;
  cfg.samples = 5;
  return cfg;
}

TEST(RunSuite, ReportsAreDeterministic) {
  for (const std::string suite : {"numerics", "cantor", "martingale"}) {
    const VerifyReport a = run_suite(small(suite));
    const VerifyReport b = run_suite(small(suite));
    EXPECT_TRUE(a.passed()) << a.to_text(false);
    EXPECT_EQ(a.to_json(), b.to_json());
    EXPECT_EQ(a.to_text(false), b.to_text(false));
  }
}

TEST(RunSuite, ChecksAreSortedAndNamedByModule) {
  const VerifyReport rep = run_suite(small("measure"));
  ASSERT_FALSE(rep.checks.empty());
  EXPECT_TRUE(std::is_sorted(rep.checks.begin(), rep.checks.end(),
                             [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; }));
  for (const CheckResult& c : rep.checks) EXPECT_EQ(c.name.rfind("measure.", 0), 0U) << c.name;
}

TEST(RunSuite, JsonCarriesSchemaAndNoTiming) {
  const std::string json = run_suite(small("numerics")).to_json();
  EXPECT_NE(json.find("\"schema\": \"rbmeasure/1\""), std::string::npos) << json;
  EXPECT_NE(json.find("\"passed\": true"), std::string::npos);
  EXPECT_EQ(json.find("seconds"), std::string::npos);
}

TEST(RunSuite, DegenerateConfigPassesVacuously) {
  SuiteConfig cfg;
  cfg.depth = 0;
  cfg.pair_depth = 0;
  cfg.samples = 0;
  const VerifyReport rep = run_suite(cfg);
  EXPECT_TRUE(rep.passed()) << rep.to_text(false);
  EXPECT_EQ(rep.count(CheckStatus::kFail), 0U);
}

TEST(RunSuite, InjectedFaultIsTheOnlyFailure) {
  SuiteConfig cfg = small("splitting");
  cfg.inject_fault = true;
  const VerifyReport rep = run_suite(cfg);
  EXPECT_FALSE(rep.passed());
  ASSERT_EQ(rep.count(CheckStatus::kFail), 1U) << rep.to_text(false);
  const auto failed = std::find_if(rep.checks.begin(), rep.checks.end(), [](const CheckResult& c) {
    return c.status == CheckStatus::kFail;
  });
  EXPECT_EQ(failed->name, "fault.injected_operator");
  EXPECT_FALSE(failed->residual.empty());
  EXPECT_NE(rep.to_text(false).find("FAIL  fault.injected_operator"), std::string::npos);
}

TEST(RunSuite, UnknownSuiteIsRejected) {
  EXPECT_THROW(run_suite(small("nosuch")), PreconditionError);
  const std::vector<std::string> names = suite_names();
  EXPECT_EQ(names.front(), "default");
  EXPECT_NE(std::find(names.begin(), names.end(), "splitting"), names.end());
}

}  // namespace
}  // namespace rbm
