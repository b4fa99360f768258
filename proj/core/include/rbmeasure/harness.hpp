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
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rbmeasure/martingale.hpp"
#include "rbmeasure/splitting.hpp"

namespace rbm {

// ---------------------------------------------------------------------------
// Random generators. All draws use std::mt19937_64 with modulo reduction so
// that outputs are identical across standard libraries.
// ---------------------------------------------------------------------------

/// Uniform integer in [0, n].
std::uint64_t draw_upto(std::mt19937_64& rng, std::uint64_t n);

/// k / 2^bits with k uniform in [0, hi * 2^bits], hi a nonnegative integer.
Rational random_dyadic(std::mt19937_64& rng, long hi, unsigned bits = 10);

/// A random string of length exactly n.
BitString random_string(std::mt19937_64& rng, std::size_t n);

/// A random prefix set whose members have length <= max_depth.
PrefixSet random_prefix_set(std::mt19937_64& rng, std::size_t max_depth);

/// A random clopen set at depth `depth` (each length-depth string kept with
/// probability 1/2).
ClopenSet random_clopen(std::mt19937_64& rng, std::size_t depth);

/// A nu-martingale tabulated to `depth` and constant past it. d(lambda) is on
/// the grid k/2^10 in [0, 2]; at each nu-positive node with two positive
/// children the conditional mass is split by a random fraction on the same
/// grid; null children get random grid values.
Martingale random_martingale(const ProbMeasure& nu, std::size_t depth, std::mt19937_64& rng);
Martingale random_martingale(const ProbMeasure& nu, std::size_t depth, std::uint64_t seed);

/// The three measures used by the identity suites: uniform, coin-toss with
/// every bias 1/4, and coin-toss with biases (1/4, 1/2) then 3/4.
std::vector<std::pair<std::string, ProbMeasure>> standard_measures();

// ---------------------------------------------------------------------------
// Suite runner
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kPass;
  std::string detail;
  std::string residual;  // exact residual of the first failure, if any
  double seconds = 0.0;  // text summary only
};

struct SuiteConfig {
  std::uint64_t seed = 20240601;
  std::size_t depth = 8;       // exhaustive identity scans
  std::size_t pair_depth = 4;  // operator-pair matrices
  std::size_t samples = 50;    // random subjects per check
  bool inject_fault = false;
  std::string suite = "default";

  /// Parses the suite configuration JSON; unknown keys are rejected.
  /// Throws PreconditionError on malformed input.
  static SuiteConfig from_json_text(std::string_view text);
};

struct VerifyReport {
  std::string suite;
  SuiteConfig config;
  std::vector<CheckResult> checks;  // sorted by name

  bool passed() const;
  std::size_t count(CheckStatus status) const;
  /// Machine-readable report (schema "rbmeasure/1"), no timing data.
  std::string to_json() const;
  /// Plain-text summary; per-check timing when with_timing is set.
  std::string to_text(bool with_timing) const;
};

/// Names of the suites run_suite accepts.
std::vector<std::string> suite_names();

/// Runs the selected suite ("default" runs every module's checks; a module
/// name runs that module only). Throws PreconditionError for unknown suites.
VerifyReport run_suite(const SuiteConfig& config);

/// Number of strings visited by an exhaustive scan of {0,1}^{<=n}.
std::size_t exhaustive_scan_count(std::size_t n);

}  // namespace rbm
