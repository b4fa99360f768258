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


#include <benchmark/benchmark.h>

#include <array>
#include <random>
#include <vector>

#include "rbmeasure/harness.hpp"
#include "rbmeasure/nullcover.hpp"
#include "rbmeasure/regularity.hpp"
#include "rbmeasure/sequence.hpp"
#include "rbmeasure/splitting.hpp"

namespace {

using rbm::BitString;
using rbm::Rational;

void BM_RobinHood(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<std::array<Rational, 3>> args;
  while (args.size() < 1024) {
    const Rational alpha(1 + static_cast<long>(rng() % 255), 256);
    const Rational s = rbm::random_dyadic(rng, 3, 8);
    const Rational t = rbm::random_dyadic(rng, 3, 8);
    args.push_back({alpha, s, t});
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = args[i++ % args.size()];
    benchmark::DoNotOptimize(rbm::robin_hood(a[0], a[1], a[2]));
  }
}
BENCHMARK(BM_RobinHood);

void BM_MeasureOfCoinToss(benchmark::State& state) {
  const rbm::ProbMeasure nu =
      rbm::ProbMeasure::coin_toss({Rational(1, 4), Rational(1, 2)}, Rational(3, 4));
  std::mt19937_64 rng(2);
  const BitString w = rbm::random_string(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nu.measure_of(w));
}
BENCHMARK(BM_MeasureOfCoinToss)->Arg(8)->Arg(32)->Arg(128);

// Cold memo table each iteration.
void BM_RegularizeLeaves(benchmark::State& state) {
  const rbm::ProbMeasure mu;
  const std::size_t depth = static_cast<std::size_t>(state.range(0));
  const rbm::Martingale d = rbm::random_martingale(mu, depth, std::uint64_t{3});
  for (auto _ : state) {
    const rbm::Martingale ld = rbm::regularize(d, mu);
    rbm::for_each_string_of_length(depth, [&](const BitString& w) {
      benchmark::DoNotOptimize(ld(w));
    });
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << depth));
}
BENCHMARK(BM_RegularizeLeaves)->Arg(6)->Arg(8)->Arg(10);

void BM_VerifyMartingale(benchmark::State& state) {
  const std::size_t depth = static_cast<std::size_t>(state.range(0));
  const rbm::ProbMeasure nu =
      rbm::ProbMeasure::coin_toss({Rational(1, 4), Rational(1, 2)}, Rational(3, 4));
  const rbm::Martingale d = rbm::random_martingale(nu, depth, std::uint64_t{4});
  for (auto _ : state) benchmark::DoNotOptimize(rbm::verify_martingale(d, nu, depth).ok);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rbm::exhaustive_scan_count(depth)));
}
BENCHMARK(BM_VerifyMartingale)->Arg(6)->Arg(8)->Arg(10);

void BM_CombinePairEstimate(benchmark::State& state) {
  const rbm::ProbMeasure mu;
  const rbm::CombinedMeasurements c =
      rbm::combine_pair(rbm::cylinder_measurement(BitString("01"), mu),
                        rbm::clopen_measurement(
                            rbm::ClopenSet::from_strings({BitString("00"), BitString("11")}), mu));
  const unsigned r = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rbm::measure_estimate(c.union_, r).plus_value);
}
BENCHMARK(BM_CombinePairEstimate)->Arg(4)->Arg(16);

void BM_SpineUnionEstimate(benchmark::State& state) {
  const rbm::SplittingOp op = rbm::sequence_union(rbm::spine_family(rbm::ProbMeasure()));
  const unsigned r = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rbm::measure_estimate(op, r).plus_value);
}
BENCHMARK(BM_SpineUnionEstimate)->Arg(4)->Arg(16);

void BM_ClopenComplement(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const rbm::ClopenSet x = rbm::random_clopen(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(x.complement());
}
BENCHMARK(BM_ClopenComplement)->Arg(8)->Arg(16);

void BM_StrongCoverValue(benchmark::State& state) {
  const rbm::Martingale d = rbm::null_cover_to_strong(rbm::z3_cover());
  const BitString w = BitString::zeros(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(d(w));
}
BENCHMARK(BM_StrongCoverValue)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
