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

// Pipeline documents: named measures, martingale expression trees, operator
// DAGs and an ordered command list, read from JSON.
//
//   {
//     "measures":    {"beta": {"kind": "coin_toss", "biases": ["1/4"], "tail": "3/4"}},
//     "martingales": {"d": {"type": "z3_ladder", "r": 1}},
//     "operators":   {"c": {"type": "cylinder", "w": "01"}},
//     "commands":    [{"action": "eval", "martingale": "d", "w": "00"}]
//   }
//
// Rationals are written as "p/q" strings (plain integers are accepted).
// The measure "mu" (uniform) and the martingales "unit" and "zero" are always
// defined; "measure" fields default to "mu".

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbmeasure/splitting.hpp"

namespace rbm {

/// Malformed documents, unresolved names and reference cycles.
class ConfigError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

enum class ExitStatus : int { kOk = 0, kVerificationFailure = 1, kUsage = 2 };

struct ActionRequest {
  std::string action;  // eval, measure, split, regularize, diagonalize, zero-one, identity, verify
  std::string martingale;
  std::string op;
  std::string measure = "mu";
  std::string w;
  std::optional<unsigned> precision;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> m;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> pair_depth;
  std::string suite = "default";
  bool inject_fault = false;
  bool timing = false;  // per-check timing in verify's text output
};

struct ActionResult {
  ExitStatus status = ExitStatus::kOk;
  std::string text;
  std::string json;  // a single JSON object, schema "rbmeasure/1"
};

class Pipeline {
 public:
  /// A document holding only the built-ins.
  Pipeline();
  /// Parses and resolves a document. Throws ConfigError.
  static Pipeline from_json_text(std::string_view text);

  ProbMeasure measure(const std::string& name) const;
  Martingale martingale(const std::string& name) const;
  SplittingOp op(const std::string& name) const;

  std::vector<std::string> measure_names() const;
  std::vector<std::string> martingale_names() const;
  std::vector<std::string> operator_names() const;
  const std::vector<ActionRequest>& commands() const;

  /// Runs one action. Precondition and configuration failures are reported
  /// through the status (kUsage) rather than thrown.
  ActionResult run(const ActionRequest& request) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// Parses one entry of a "commands" array.
ActionRequest parse_action(std::string_view json_object_text);

}  // namespace rbm
