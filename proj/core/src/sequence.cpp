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

#include "rbmeasure/sequence.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

namespace rbm {

namespace {

Rational exact_or_upper(const Martingale& m, const BitString& w, unsigned r) {
  if (m.exact()) return m.value(w);
  return m.approximate(w, r + 4) + Rational::pow2(-static_cast<long>(r + 4));
}

// Theta+_r(d): the limit stage of a union family at stage precision r.
class SequencePlusNode final : public MartingaleNode {
 public:
  SequencePlusNode(ModulatedFamily family, unsigned r, Martingale d)
      : family_(std::move(family)), r_(r), d_(std::move(d)) {}

  bool exact() const override { return family_.stationary && stage_plus(0).exact(); }

  Rational value(const BitString& w) const override {
    if (!exact()) {
      throw EvaluationError("the limit stage of " + family_.name + " has no exact value");
    }
    return stage_plus(0).value(w);
  }

  Rational approximate(const BitString& w, unsigned t) const override {
    if (family_.stationary) return stage_plus(0).approximate(w, t);
    const std::size_t k = family_.modulus(t + 1, r_, d_, w);
    const Martingale current = stage_plus(k);
    if (k > 0 && current.exact()) {
      const Martingale previous = stage_plus(k - 1);
      if (previous.exact() && previous.value(w) > current.value(w)) {
        throw EvaluationError("monotonicity breach in " + family_.name + " at stage " +
                              std::to_string(k) + ", string " + w.display());
      }
    }
    return current.approximate(w, t + 1);
  }

  std::string describe() const override {
    return "sequence_plus(" + family_.name + ", r=" + std::to_string(r_) + ", " +
           d_.describe() + ")";
  }

 private:
  Martingale stage_plus(std::size_t k) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto it = stages_.find(k);
      if (it != stages_.end()) return it->second;
    }
    Martingale plus = family_.stage(k).apply(r_, d_).plus;
    std::lock_guard<std::mutex> lock(mu_);
    return stages_.emplace(k, std::move(plus)).first->second;
  }

  ModulatedFamily family_;
  unsigned r_;
  Martingale d_;
  mutable std::mutex mu_;
  mutable std::map<std::size_t, Martingale> stages_;
};

}  // namespace

ModulatedFamily::Modulus residual_modulus(ModulatedFamily::Stage stage, std::size_t cap) {
  return [stage = std::move(stage), cap](unsigned t, unsigned r, const Martingale& d,
                                         const BitString& w) -> std::size_t {
    const Rational target = Rational::pow2(-static_cast<long>(t));
    // The residual is nonincreasing in k for a union-monotone family, so a
    // galloping search finds the least good stage.
    auto good = [&](std::size_t k) {
      return exact_or_upper(stage(k).apply(r, d).minus, w, t) <= target;
    };
    if (good(0)) return std::size_t{0};
    std::size_t bad = 0;
    std::size_t hi = 1;
    while (!good(hi)) {
      if (hi >= cap) {
        throw EvaluationError("residual modulus exhausted " + std::to_string(cap) +
                              " stages at " + w.display() + " for t=" + std::to_string(t));
      }
      bad = hi;
      hi = std::min(cap, hi * 2);
    }
    while (hi - bad > 1) {
      const std::size_t mid = bad + (hi - bad) / 2;
      (good(mid) ? hi : bad) = mid;
    }
    return hi;
  };
}

ModulatedFamily spine_family(const ProbMeasure& nu) {
  ModulatedFamily family;
  family.name = "spine";
  family.nu = nu;
  family.stage = [nu](std::size_t k) {
    std::vector<BitString> members;
    for (std::size_t j = 0; j <= k; ++j) members.push_back(BitString::zeros(j).child(1));
    return prefix_set_measurement(PrefixSet(std::move(members)), nu);
  };
  family.modulus = residual_modulus(family.stage);
  family.direction = Monotonicity::kUnion;
  return family;
}

ModulatedFamily constant_family(const SplittingOp& op, Monotonicity direction) {
  ModulatedFamily family;
  family.name = "constant(" + op.provenance() + ")";
  family.nu = op.measure();
  family.stage = [op](std::size_t) { return op; };
  family.modulus = [](unsigned, unsigned, const Martingale&, const BitString&) {
    return std::size_t{0};
  };
  family.direction = direction;
  family.stationary = true;
  return family;
}

ModulatedFamily complemented(const ModulatedFamily& family) {
  ModulatedFamily out;
  out.name = "complemented(" + family.name + ")";
  out.nu = family.nu;
  out.stage = [stage = family.stage](std::size_t k) { return complement(stage(k)); };
  out.direction = family.direction == Monotonicity::kUnion ? Monotonicity::kIntersection
                                                           : Monotonicity::kUnion;
  out.stationary = family.stationary;
  if (family.stationary) {
    out.modulus = family.modulus;
  } else {
    out.modulus = residual_modulus(out.stage);
  }
  return out;
}

SplittingOp sequence_union(const ModulatedFamily& family) {
  if (family.direction != Monotonicity::kUnion) {
    throw PreconditionError("sequence_union needs a union-monotone family");
  }
  std::optional<SplitTarget> target;
  if (family.stationary) target = family.stage(0).target();
  return SplittingOp(
      "sequence_union(" + family.name + ")", family.nu,
      [family](unsigned r, const Martingale& d) {
        const Martingale plus(std::make_shared<SequencePlusNode>(family, r + 1, d));
        const std::size_t m = family.modulus(r + 1, r + 1, d, BitString());
        return SplitPair{plus, family.stage(m).apply(r + 1, d).minus};
      },
      std::move(target));
}

SplittingOp sequence_intersection(const ModulatedFamily& family) {
  if (family.direction != Monotonicity::kIntersection) {
    throw PreconditionError("sequence_intersection needs an intersection-monotone family");
  }
  return complement(sequence_union(complemented(family)));
}

ModulatedFamily null_sequence_union(std::string name, const ProbMeasure& nu,
                                    std::function<SplittingOp(std::size_t j)> members,
                                    std::size_t count) {
  ModulatedFamily family;
  family.name = std::move(name);
  family.nu = nu;
  family.stage = [members, nu, count, label = family.name](std::size_t k) {
    return SplittingOp(
        label + "[" + std::to_string(k) + "]", nu,
        [members, count, k](unsigned r, const Martingale& d) {
          std::vector<Martingale> terms;
          const std::size_t last = std::min(k + 1, count);
          for (std::size_t j = 0; j < last; ++j) {
            const unsigned bits = static_cast<unsigned>(j) + r + 1;
            Martingale term = members(j).apply(bits, unit()).plus;
            if (exact_or_upper(term, BitString(), bits) >
                Rational::pow2(-static_cast<long>(bits))) {
              throw EvaluationError("null member " + std::to_string(j) +
                                    " has estimate above 2^-" + std::to_string(bits));
            }
            terms.push_back(std::move(term));
          }
          return SplitPair{sum(std::move(terms)), d};
        });
  };
  family.modulus = [nu, count](unsigned t, unsigned r, const Martingale&,
                               const BitString& w) -> std::size_t {
    if (count == 0) return 0;
    const long bound = static_cast<long>(t) + static_cast<long>(nu.positivity_bits(w.size())) -
                       static_cast<long>(r) - 1;
    const std::size_t k = bound > 0 ? static_cast<std::size_t>(bound) : 0;
    return std::min(k, count - 1);
  };
  family.direction = Monotonicity::kUnion;
  family.stationary = count <= 1;
  return family;
}

}  // namespace rbm
