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

#include "rbmeasure/harness.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "rbmeasure/diagonal.hpp"
#include "rbmeasure/nullcover.hpp"
#include "rbmeasure/regularity.hpp"
#include "rbmeasure/sequence.hpp"

namespace rbm {

std::uint64_t draw_upto(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t x = rng();
  if (n == UINT64_MAX) return x;
  return x % (n + 1);
}

Rational random_dyadic(std::mt19937_64& rng, long hi, unsigned bits) {
  const std::uint64_t scale = std::uint64_t{1} << bits;
  const std::uint64_t k = draw_upto(rng, static_cast<std::uint64_t>(hi) * scale);
  return Rational(mpq_class(mpz_class(std::to_string(k)), mpz_class(std::to_string(scale))));
}

BitString random_string(std::mt19937_64& rng, std::size_t n) {
  std::string bits(n, '0');
  for (auto& c : bits) c = draw_upto(rng, 1) ? '1' : '0';
  return BitString(bits);
}

PrefixSet random_prefix_set(std::mt19937_64& rng, std::size_t max_depth) {
  std::vector<BitString> members;
  std::function<void(const BitString&)> grow = [&](const BitString& w) {
    if (w.size() >= max_depth) {
      if (draw_upto(rng, 1)) members.push_back(w);
      return;
    }
    switch (draw_upto(rng, 2)) {
      case 0:
        members.push_back(w);
        break;
      case 1:
        break;
      default:
        grow(w.child(0));
        grow(w.child(1));
    }
  };
  grow(BitString());
  return PrefixSet(std::move(members));
}

ClopenSet random_clopen(std::mt19937_64& rng, std::size_t depth) {
  std::vector<BitString> selected;
  for_each_string_of_length(depth, [&](const BitString& w) {
    if (draw_upto(rng, 1)) selected.push_back(w);
  });
  return ClopenSet::from_selection(depth, selected);
}

Martingale random_martingale(const ProbMeasure& nu, std::size_t depth, std::mt19937_64& rng) {
  std::map<BitString, Rational> values;
  values[BitString()] = random_dyadic(rng, 2);
  const Rational one(1);
  for (std::size_t n = 0; n < depth; ++n) {
    for_each_string_of_length(n, [&](const BitString& w) {
      const Rational dw = values.at(w);
      const BitString w0 = w.child(0);
      const BitString w1 = w.child(1);
      if (nu.is_null(w)) {
        values[w0] = random_dyadic(rng, 2);
        values[w1] = random_dyadic(rng, 2);
        return;
      }
      const Rational alpha = nu.zero_fraction(w);
      if (alpha.is_zero()) {
        values[w0] = random_dyadic(rng, 2);
        values[w1] = dw;
      } else if (alpha == one) {
        values[w0] = dw;
        values[w1] = random_dyadic(rng, 2);
      } else {
        const Rational f = random_dyadic(rng, 1);
        values[w0] = f * dw / alpha;
        values[w1] = (one - f) * dw / (one - alpha);
      }
    });
  }
  return table(std::move(values), "random");
}

Martingale random_martingale(const ProbMeasure& nu, std::size_t depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_martingale(nu, depth, rng);
}

std::vector<std::pair<std::string, ProbMeasure>> standard_measures() {
  return {
      {"uniform", ProbMeasure::uniform()},
      {"quarter", ProbMeasure::coin_toss({}, Rational(1, 4))},
      {"mixed", ProbMeasure::coin_toss({Rational(1, 4), Rational(1, 2)}, Rational(3, 4))},
  };
}

std::size_t exhaustive_scan_count(std::size_t n) {
  return verify_martingale(unit(), ProbMeasure::uniform(), n).strings_visited;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  CheckStatus status = CheckStatus::kPass;
  std::string detail;
  std::string residual;
};

Outcome pass(std::string detail) { return {CheckStatus::kPass, std::move(detail), {}}; }

Outcome fail(std::string detail, std::string residual = {}) {
  return {CheckStatus::kFail, std::move(detail), std::move(residual)};
}

struct CheckSpec {
  std::string module;
  std::string name;
  std::function<Outcome(const SuiteConfig&)> run;
};

// FNV-1a, so that each check's stream depends only on (seed, name).
std::uint64_t name_hash(const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::mt19937_64 stream(const SuiteConfig& cfg, const std::string& name) {
  return std::mt19937_64(cfg.seed ^ name_hash(name));
}

Rational p2(long e) { return Rational::pow2(e); }

std::string str(std::size_t n) { return std::to_string(n); }

const std::vector<unsigned> kEstimateBits = {4, 8, 16};

// Random subjects shared by the identity checks, one pool per measure.
std::vector<Martingale> subject_pool(const SuiteConfig& cfg, std::size_t measure_index,
                                     const ProbMeasure& nu) {
  std::mt19937_64 rng = stream(cfg, "pool#" + str(measure_index));
  std::vector<Martingale> pool;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    pool.push_back(random_martingale(nu, cfg.depth, rng));
  }
  return pool;
}

// Accumulates verify_martingale outcomes over many subjects.
class IdentityTally {
 public:
  explicit IdentityTally(std::size_t depth) : depth_(depth) {}

  void check(const Martingale& d, const ProbMeasure& nu, const std::string& label) {
    ++subjects_;
    const MartingaleReport report = verify_martingale(d, nu, depth_);
    if (!report.ok && !failure_) {
      const MartingaleViolation& v = report.violations.front();
      failure_ = fail(label + " under " + nu.describe() + ": " + v.kind + " violation at " +
                          v.w.display(),
                      v.residual.to_string());
    }
  }

  Outcome outcome() const {
    if (failure_) return *failure_;
    return pass(str(subjects_) + " subjects, depth " + str(depth_));
  }

 private:
  std::size_t depth_;
  std::size_t subjects_ = 0;
  std::optional<Outcome> failure_;
};

using IdentityBody = std::function<void(IdentityTally&, const SuiteConfig&, std::size_t,
                                        const ProbMeasure&, const std::vector<Martingale>&)>;

Outcome identity_check(const SuiteConfig& cfg, const IdentityBody& body) {
  IdentityTally tally(cfg.depth);
  const auto measures = standard_measures();
  for (std::size_t i = 0; i < measures.size(); ++i) {
    const std::vector<Martingale> pool = subject_pool(cfg, i, measures[i].second);
    body(tally, cfg, i, measures[i].second, pool);
  }
  return tally.outcome();
}

Martingale z3_strong(const ProbMeasure& nu) { return null_cover_to_strong(z3_cover(nu)); }

SplittingOp union_of_cylinders(const std::vector<BitString>& members, const ProbMeasure& nu) {
  if (members.empty()) return complement(cylinder_measurement(BitString(), nu));
  std::vector<SplittingOp> level;
  for (const BitString& w : members) level.push_back(cylinder_measurement(w, nu));
  while (level.size() > 1) {
    std::vector<SplittingOp> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      next.push_back(combine_pair(level[i], level[i + 1]).union_);
    }
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

// Applied splitting outputs, grouped by construction.
std::vector<SplittingOp> exact_ops(const std::string& group, const ProbMeasure& nu) {
  const BitString w0("0"), w01("01");
  if (group == "cylinder") {
    return {cylinder_measurement(w0, nu), cylinder_measurement(w01, nu),
            cylinder_measurement(BitString(), nu)};
  }
  if (group == "prefix_set") {
    return {prefix_set_measurement(PrefixSet({BitString("1"), w01}), nu)};
  }
  if (group == "clopen") {
    return {clopen_measurement(ClopenSet::from_strings({BitString("00"), BitString("11")}), nu)};
  }
  if (group == "complement") return {complement(cylinder_measurement(w0, nu))};
  if (group == "combine") {
    const CombinedMeasurements c =
        combine_pair(cylinder_measurement(w0, nu), cylinder_measurement(w01, nu));
    return {c.x, c.y, c.intersection, c.union_};
  }
  if (group == "success") return {success_to_measurement(z3_strong(nu), nu)};
  if (group == "completeness") {
    return {completeness_measurement(success_to_measurement(z3_strong(nu), nu))};
  }
  return {};
}

std::vector<SplittingOp> unit_only_ops(const std::string& group, const ProbMeasure& nu) {
  const SplittingOp c0 = cylinder_measurement(BitString("0"), nu);
  if (group == "sequence_union") {
    return {sequence_union(spine_family(nu)), sequence_union(constant_family(c0))};
  }
  if (group == "sequence_intersection") {
    return {sequence_intersection(constant_family(c0, Monotonicity::kIntersection)),
            sequence_intersection(complemented(spine_family(nu)))};
  }
  if (group == "null_union") {
    const SplittingOp success = success_to_measurement(z3_strong(nu), nu);
    auto member = [success](std::size_t) { return success; };
    return {sequence_union(null_sequence_union("z3_successes", nu, member))};
  }
  return {};
}

constexpr unsigned kApplyBits = 4;

void add_identity_checks(std::vector<CheckSpec>& specs) {
  auto add = [&](const std::string& module, const std::string& name, IdentityBody body) {
    specs.push_back({module, name, [body](const SuiteConfig& cfg) {
                       return identity_check(cfg, body);
                     }});
  };

  add("martingale", "martingale.identity.unit",
      [](IdentityTally& t, const SuiteConfig&, std::size_t, const ProbMeasure& nu, const std::vector<Martingale>&) {
        t.check(unit(), nu, "unit");
        t.check(zero(), nu, "zero");
        t.check(constant(Rational(7, 3)), nu, "constant");
      });
  add("martingale", "martingale.identity.table",
      [](IdentityTally& t, const SuiteConfig&, std::size_t, const ProbMeasure& nu, const std::vector<Martingale>& pool) {
        for (const Martingale& d : pool) t.check(d, nu, "random table");
      });
  add("martingale", "martingale.identity.combinators",
      [](IdentityTally& t, const SuiteConfig&, std::size_t, const ProbMeasure& nu, const std::vector<Martingale>& pool) {
        for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
          t.check(sum({pool[i], pool[i + 1]}), nu, "sum");
          t.check(scale(Rational(3, 8), pool[i]), nu, "scale");
        }
      });
  add("martingale", "martingale.identity.prefix_set",
      [](IdentityTally& t, const SuiteConfig& cfg, std::size_t index, const ProbMeasure& nu, const std::vector<Martingale>&) {
        std::mt19937_64 rng = stream(cfg, "prefix_sets#" + str(index));
        for (int i = 0; i < 16; ++i) {
          t.check(from_prefix_set(random_prefix_set(rng, 5), nu), nu, "from_prefix_set");
        }
      });
  add("martingale", "martingale.identity.z3_ladder",
      [](IdentityTally& t, const SuiteConfig&, std::size_t index, const ProbMeasure& nu, const std::vector<Martingale>&) {
        for (unsigned r = 0; r < 6; ++r) t.check(z3_ladder(r, nu), nu, "z3_ladder");
        if (index == 0) t.check(doubling_ladder(8), nu, "doubling_ladder");
      });
  add("martingale", "martingale.identity.regularize",
      [](IdentityTally& t, const SuiteConfig&, std::size_t, const ProbMeasure& nu, const std::vector<Martingale>& pool) {
        t.check(regularize(unit(), nu), nu, "regularize(unit)");
        for (const Martingale& d : pool) t.check(regularize(d, nu), nu, "regularize");
      });
  add("martingale", "martingale.identity.null_cover",
      [](IdentityTally& t, const SuiteConfig&, std::size_t, const ProbMeasure& nu, const std::vector<Martingale>&) {
        const NullCover cover = z3_cover(nu);
        t.check(null_cover_to_strong(cover), nu, "null_cover_to_strong");
        for (unsigned big_r = 0; big_r <= 8; big_r += 2) {
          t.check(null_cover_truncation(cover, big_r), nu, "null_cover_truncation");
        }
      });
  add("diagonal", "diagonal.identity.zero_one",
      [](IdentityTally& t, const SuiteConfig&, std::size_t, const ProbMeasure& nu, const std::vector<Martingale>& pool) {
        for (const Martingale& d : pool) {
          t.check(zero_one_transform(regularize(d, nu), nu, 2).transformed, nu, "zero_one");
        }
      });

  for (const std::string group :
       {"cylinder", "prefix_set", "clopen", "complement", "combine", "success", "completeness"}) {
    add("splitting", "splitting.identity." + group,
        [group](IdentityTally& t, const SuiteConfig&, std::size_t, const ProbMeasure& nu,
                const std::vector<Martingale>& pool) {
          for (const SplittingOp& op : exact_ops(group, nu)) {
            for (std::size_t i = 0; i <= pool.size(); ++i) {
              const Martingale& d = i == 0 ? unit() : pool[i - 1];
              const SplitPair pair = op.apply(kApplyBits, d);
              t.check(pair.plus, nu, op.provenance() + " plus");
              t.check(pair.minus, nu, op.provenance() + " minus");
            }
          }
        });
  }
  for (const std::string group : {"sequence_union", "sequence_intersection", "null_union"}) {
    add("splitting", "splitting.identity." + group,
        [group](IdentityTally& t, const SuiteConfig&, std::size_t, const ProbMeasure& nu,
                const std::vector<Martingale>&) {
          for (const SplittingOp& op : unit_only_ops(group, nu)) {
            const SplitPair pair = op.apply(kApplyBits, unit());
            t.check(pair.plus, nu, op.provenance() + " plus");
            t.check(pair.minus, nu, op.provenance() + " minus");
          }
        });
  }
}

// ---------------------------------------------------------------------------
// numerics, cantor, measure
// ---------------------------------------------------------------------------

Rational random_rational(std::mt19937_64& rng) {
  const std::uint64_t num = draw_upto(rng, std::uint64_t{1} << 20);
  const std::uint64_t den = 1 + draw_upto(rng, (std::uint64_t{1} << 20) - 1);
  return Rational(static_cast<long>(num), static_cast<long>(den));
}

Outcome numerics_dyadic_error(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "numerics.dyadic_error");
  const std::size_t n = cfg.samples * 200;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational x = random_rational(rng);
    for (unsigned r = 0; r <= 64; ++r) {
      const Rational err = x - dyadic_approx(x, r).value();
      if (err.is_negative() || err >= p2(-static_cast<long>(r))) {
        return fail("error out of [0, 2^-" + str(r) + ") for " + x.to_string(), err.to_string());
      }
    }
  }
  return pass(str(n) + " rationals, r in 0..64");
}

Outcome numerics_dyadic_monotone(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "numerics.dyadic_monotone");
  const std::size_t n = cfg.samples * 20;
  for (std::size_t i = 0; i < n; ++i) {
    Rational x = random_rational(rng);
    Rational y = random_rational(rng);
    if (y < x) std::swap(x, y);
    Rational previous_error = x + Rational(1);
    for (unsigned r = 0; r <= 64; ++r) {
      if (dyadic_approx(x, r).value() > dyadic_approx(y, r).value()) {
        return fail("approximation not monotone at r=" + str(r) + " for " + x.to_string() +
                    " <= " + y.to_string());
      }
      const Rational err = x - dyadic_approx(x, r).value();
      if (err > previous_error) {
        return fail("error increased at r=" + str(r) + " for " + x.to_string(), err.to_string());
      }
      previous_error = err;
    }
  }
  return pass(str(n) + " ordered pairs");
}

Outcome numerics_normalization(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "numerics.normalization");
  const std::size_t n = cfg.samples * 20;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational x = random_rational(rng);
    const long k = 1 + static_cast<long>(draw_upto(rng, 999));
    const Rational scaled(Rational(x.numerator()) * Rational(k) / (Rational(x.denominator()) * Rational(k)));
    if (!(scaled == x) || !(Rational::parse(x.to_string()) == x) ||
        Rational::parse(scaled.to_string()).to_string() != x.to_string()) {
      return fail("normalization round-trip failed for " + x.to_string());
    }
  }
  return pass(str(n) + " round-trips");
}

Outcome cantor_enumeration(const SuiteConfig&) {
  BitString previous;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << 16); ++k) {
    const BitString s = BitString::from_index(k);
    if (s.index() != k) return fail("index round-trip failed at k=" + std::to_string(k));
    if (k > 0 && !(previous < s)) return fail("enumeration order broken at k=" + std::to_string(k));
    previous = s;
  }
  return pass("k < 2^16");
}

Outcome cantor_de_morgan(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "cantor.de_morgan");
  const std::size_t n = cfg.samples * 4;
  for (std::size_t i = 0; i < n; ++i) {
    const ClopenSet a = random_clopen(rng, draw_upto(rng, 4));
    const ClopenSet b = random_clopen(rng, draw_upto(rng, 4));
    const ClopenSet c = random_clopen(rng, draw_upto(rng, 4));
    const bool ok =
        set_union(a, b).complement() == set_intersection(a.complement(), b.complement()) &&
        set_intersection(a, b).complement() == set_union(a.complement(), b.complement()) &&
        set_intersection(a, set_union(b, c)) ==
            set_union(set_intersection(a, b), set_intersection(a, c)) &&
        set_difference(a, b) == set_intersection(a, b.complement()) &&
        a.complement().complement() == a;
    if (!ok) {
      return fail("De Morgan failed for " + a.to_string() + ", " + b.to_string() + ", " +
                  c.to_string());
    }
  }
  return pass(str(n) + " random triples");
}

Outcome cantor_representation(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "cantor.representation_independence");
  const auto measures = standard_measures();
  const std::size_t n = cfg.samples * 4;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t depth = draw_upto(rng, 5);
    const ClopenSet x = random_clopen(rng, depth);
    for (const auto& [name, nu] : measures) {
      const Rational a = classical_measure(x.minimal_prefix_set(), nu);
      const Rational b = classical_measure(PrefixSet(x.selected_at(depth + 2)), nu);
      const Rational c = classical_measure(x, nu);
      if (!(a == b) || !(a == c)) {
        return fail("representations disagree for " + x.to_string() + " under " + name,
                    (a - b).to_string());
      }
    }
  }
  return pass(str(n) + " random clopen sets, 3 measures");
}

std::vector<std::pair<std::string, ProbMeasure>> all_builtin_measures() {
  auto measures = standard_measures();
  measures.emplace_back("two_spine", two_spine_measure(6));
  measures.emplace_back("degenerate", ProbMeasure::coin_toss({Rational(0), Rational(1)}, Rational(1, 2)));
  return measures;
}

Outcome measure_additivity(const SuiteConfig& cfg) {
  const std::size_t depth = std::min<std::size_t>(12, cfg.depth + 4);
  std::size_t checked = 0;
  for (const auto& [name, nu] : all_builtin_measures()) {
    if (!(nu.measure_of(BitString()) == Rational(1))) return fail(name + ": nu(λ) != 1");
    std::optional<Outcome> bad;
    for_each_string_below(depth, [&](const BitString& w) {
      ++checked;
      const Rational r = nu.measure_of(w) - nu.measure_of(w.child(0)) - nu.measure_of(w.child(1));
      if (!r.is_zero() && !bad) bad = fail(name + ": additivity fails at " + w.display(), r.to_string());
    });
    if (bad) return *bad;
  }
  return pass(str(checked) + " strings, |w| < " + str(depth));
}

Outcome measure_half_coin(const SuiteConfig& cfg) {
  const std::size_t depth = std::min<std::size_t>(12, cfg.depth + 4);
  const ProbMeasure half = ProbMeasure::coin_toss({Rational(1, 2)}, Rational(1, 2));
  const ProbMeasure mu = ProbMeasure::uniform();
  std::optional<Outcome> bad;
  for_each_string_below(depth, [&](const BitString& w) {
    if (!(half.measure_of(w) == mu.measure_of(w)) && !bad) {
      bad = fail("half coin differs from uniform at " + w.display());
    }
  });
  return bad ? *bad : pass("|w| < " + str(depth));
}

Outcome measure_positivity(const SuiteConfig& cfg) {
  const std::size_t depth = std::min<std::size_t>(12, cfg.depth + 4);
  for (const auto& [name, nu] : all_builtin_measures()) {
    std::optional<Outcome> bad;
    for_each_string_below(depth + 1, [&](const BitString& w) {
      if (bad || nu.is_null(w)) return;
      const Rational floor = p2(-static_cast<long>(nu.positivity_bits(w.size())));
      if (nu.measure_of(w) < floor) bad = fail(name + ": positivity bound fails at " + w.display());
    });
    if (bad) return *bad;
  }
  return pass("|w| <= " + str(depth));
}

Outcome measure_table_validation(const SuiteConfig&) {
  const ProbMeasure spine = two_spine_measure(3);
  if (!validate_table_measure(3, spine.table_values()).valid) {
    return fail("two-spine table rejected");
  }
  std::map<BitString, Rational> bad{{BitString(), Rational(1)},
                                    {BitString("0"), Rational(1, 2)},
                                    {BitString("1"), Rational(1, 4)}};
  if (validate_table_measure(1, bad).valid) return fail("non-additive table accepted");
  return pass("valid table accepted, non-additive table rejected");
}

// ---------------------------------------------------------------------------
// martingale
// ---------------------------------------------------------------------------

Outcome martingale_robin_hood(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "martingale.robin_hood");
  const std::size_t n = cfg.samples * 200;
  const Rational one(1);
  const Rational zero(0);
  std::size_t clauses[5] = {0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const Rational alpha(static_cast<long>(1 + draw_upto(rng, 1022)), 1024L);
    Rational s, t;
    do {
      s = random_dyadic(rng, 4) - one;
      t = random_dyadic(rng, 4) - one;
    } while (!in_robin_hood_domain(alpha, s, t));
    const RobinHoodResult out = robin_hood(alpha, s, t);
    ++clauses[out.clause];
    const std::string where =
        "alpha=" + alpha.to_string() + ", s=" + s.to_string() + ", t=" + t.to_string();
    const Rational before = weighted_average(alpha, s, t);
    const Rational after = weighted_average(alpha, out.s, out.t);
    if (!(before == after)) return fail("average not preserved: " + where, (after - before).to_string());
    if (before >= one && (out.s < one || out.t < one)) return fail("H_alpha not lifted: " + where);
    const Rational s_floor = s < one ? s : one;
    const Rational t_floor = t < one ? t : one;
    if (out.s < s_floor || out.t < t_floor) return fail("overdraft: " + where);
    if (s >= zero && s <= one && t >= zero && t <= one && (!(out.s == s) || !(out.t == t))) {
      return fail("[0,1]^2 not fixed: " + where);
    }
  }
  return pass(str(n) + " inputs; clauses i/ii/iii/iv = " + str(clauses[1]) + "/" +
              str(clauses[2]) + "/" + str(clauses[3]) + "/" + str(clauses[4]));
}

Outcome martingale_robin_hood_examples(const SuiteConfig&) {
  struct Case {
    Rational alpha, s, t, s_out, t_out;
  };
  const Rational h(1, 2);
  const std::vector<Case> cases = {
      {h, h, h, h, h},
      {h, Rational(3, 2), Rational(3, 4), Rational(9, 8), Rational(9, 8)},
      {h, Rational(3, 2), Rational(1, 4), Rational(1), Rational(3, 4)},
  };
  for (const Case& c : cases) {
    const RobinHoodResult out = robin_hood(c.alpha, c.s, c.t);
    if (!(out.s == c.s_out) || !(out.t == c.t_out)) {
      return fail("rh(" + c.s.to_string() + ", " + c.t.to_string() + ") = (" + out.s.to_string() +
                  ", " + out.t.to_string() + ")");
    }
  }
  return pass("3 worked examples");
}

Outcome martingale_regularize(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "martingale.regularize");
  const ProbMeasure mu = ProbMeasure::uniform();
  const Martingale lambda_unit = regularize(unit(), mu);
  std::optional<Outcome> bad;
  for_each_string_below(cfg.depth + 1, [&](const BitString& w) {
    if (!bad && !(lambda_unit.value(w) == Rational(1))) bad = fail("Λ(1) != 1 at " + w.display());
  });
  if (bad) return *bad;

  const auto measures = standard_measures();
  const std::size_t n = cfg.samples * 4;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const ProbMeasure& nu = measures[i % measures.size()].second;
    const Martingale d = random_martingale(nu, cfg.depth, rng);
    const Martingale ld = regularize(d, nu);
    if (!(ld.value(BitString()) == d.value(BitString()))) {
      return fail("Λ(d)(λ) != d(λ) for subject " + str(i),
                  (ld.value(BitString()) - d.value(BitString())).to_string());
    }
    const RegularityReport reg = check_regularity(ld, cfg.depth);
    if (!reg.ok) return fail("regularity: " + reg.failures.front());
    const RegularityReport con = check_success_containment(d, ld, nu, cfg.depth);
    if (!con.ok) return fail("containment: " + con.failures.front());
    pairs += reg.pairs_checked;
  }
  return pass(str(n) + " random subjects, " + str(pairs) + " prefix pairs");
}

Outcome martingale_regularize_examples(const SuiteConfig&) {
  const ProbMeasure mu = ProbMeasure::uniform();
  const Martingale a = regularize(
      table({{BitString(), Rational(1)}, {BitString("0"), Rational(3, 2)},
             {BitString("1"), Rational(1, 2)}}),
      mu);
  if (!(a.value(BitString("0")) == Rational(1)) || !(a.value(BitString("1")) == Rational(1))) {
    return fail("first worked example: Λ(d)(0) = " + a.value(BitString("0")).to_string());
  }
  const Martingale b = regularize(
      table({{BitString(), Rational(1, 2)}, {BitString("0"), Rational(1)},
             {BitString("1"), Rational(0)}, {BitString("00"), Rational(2)},
             {BitString("01"), Rational(0)}}),
      mu);
  if (!(b.value(BitString("00")) == Rational(1)) || !(b.value(BitString("01")) == Rational(1))) {
    return fail("second worked example: Λ(d)(00) = " + b.value(BitString("00")).to_string());
  }
  return pass("2 worked examples");
}

Outcome martingale_prefix_sum(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "martingale.prefix_sum_bound");
  const auto measures = standard_measures();
  const std::size_t depth = std::min<std::size_t>(10, cfg.depth + 2);
  const std::size_t n = cfg.samples * 20;
  for (std::size_t i = 0; i < n; ++i) {
    const ProbMeasure& nu = measures[i % measures.size()].second;
    const Martingale d = random_martingale(nu, depth, rng);
    const PrefixSet a = random_prefix_set(rng, depth);
    const PrefixSumBound bound = prefix_sum_bound(d, a, nu);
    if (!bound.holds) return fail("prefix-sum bound fails for subject " + str(i), (bound.lhs - bound.bound).to_string());
    const Rational covered = classical_measure(coverage_set(d, depth), nu);
    if (covered > d.value(BitString())) {
      return fail("coverage measure exceeds d(λ) for subject " + str(i),
                  (covered - d.value(BitString())).to_string());
    }
  }
  return pass(str(n) + " (martingale, prefix set) pairs, depth " + str(depth));
}

Outcome martingale_coverage_examples(const SuiteConfig&) {
  const CoverageCertificate a = covers(z3_ladder(1), BitString("001"));
  if (!a.covered || !(a.witness == BitString("00"))) return fail("z3_ladder(1) on 001");
  const CoverageCertificate b = covers(unit(), BitString());
  if (!b.covered || !b.witness.empty()) return fail("unit on λ");
  const CoverageCertificate c =
      covers(from_prefix_set(PrefixSet({BitString("0")}), ProbMeasure::uniform()), BitString("11"));
  if (c.covered || c.depth != 2) return fail("prefix set {0} on 11");
  if (!(coverage_set(z3_ladder(0), 4) == ClopenSet::cylinder(BitString("0")))) {
    return fail("coverage set of z3_ladder(0) is not C_0");
  }
  return pass("4 coverage certificates");
}

// ---------------------------------------------------------------------------
// splitting
// ---------------------------------------------------------------------------

std::vector<BitString> strings_upto(std::size_t depth) {
  std::vector<BitString> out;
  for_each_string_below(depth + 1, [&](const BitString& w) { out.push_back(w); });
  return out;
}

Outcome splitting_cylinder_estimates(const SuiteConfig& cfg) {
  auto measures = standard_measures();
  measures.emplace_back("two_spine", two_spine_measure(cfg.pair_depth + 1));
  std::size_t case_one = 0;
  for (const auto& [name, nu] : measures) {
    for (const BitString& w : strings_upto(cfg.pair_depth)) {
      const SplittingOp op = cylinder_measurement(w, nu);
      const Rational expected = nu.measure_of(w);
      if (expected.is_zero()) ++case_one;
      for (unsigned r : {0u, 1u, 4u, 8u, 16u}) {
        const MeasureEstimate est = measure_estimate(op, r);
        if (!est.exact || !(est.plus_value == expected)) {
          return fail("cylinder " + w.display() + " under " + name + " at r=" + str(r) +
                          " estimates " + est.plus_value.to_string(),
                      (est.plus_value - expected).to_string());
        }
      }
    }
  }
  return pass("|w| <= " + str(cfg.pair_depth) + ", " + str(case_one) + " null cylinders");
}

Outcome splitting_inclusion_exclusion(const SuiteConfig& cfg) {
  const std::vector<std::pair<std::string, ProbMeasure>> measures = {
      {"uniform", ProbMeasure::uniform()}, {"quarter", ProbMeasure::coin_toss({}, Rational(1, 4))}};
  const std::vector<BitString> pool = strings_upto(cfg.pair_depth);
  std::size_t pairs = 0;
  for (const auto& [name, nu] : measures) {
    std::vector<SplittingOp> ops;
    for (const BitString& w : pool) ops.push_back(cylinder_measurement(w, nu));
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = 0; j < pool.size(); ++j) {
        ++pairs;
        const CombinedMeasurements c = combine_pair(ops[i], ops[j]);
        const ClopenSet a = ClopenSet::cylinder(pool[i]);
        const ClopenSet b = ClopenSet::cylinder(pool[j]);
        const Rational classical_union = classical_measure(set_union(a, b), nu);
        for (unsigned r : kEstimateBits) {
          const Rational tol = p2(1 - static_cast<long>(r));
          const Rational u = measure_estimate(c.union_, r).plus_value;
          const Rational n = measure_estimate(c.intersection, r).plus_value;
          const Rational x = measure_estimate(c.x, r).plus_value;
          const Rational y = measure_estimate(c.y, r).plus_value;
          const Rational gap = abs(u + n - x - y);
          if (gap > tol) {
            return fail("inclusion-exclusion off for " + pool[i].display() + ", " +
                            pool[j].display() + " under " + name + " at r=" + str(r),
                        gap.to_string());
          }
          if (abs(u - classical_union) > tol) {
            return fail("union estimate off for " + pool[i].display() + ", " + pool[j].display() +
                            " under " + name + " at r=" + str(r),
                        (u - classical_union).to_string());
          }
        }
      }
    }
  }
  return pass(str(pairs) + " cylinder pairs, r in {4, 8, 16}");
}

Outcome splitting_algebra_closure(const SuiteConfig& cfg) {
  const std::vector<std::pair<std::string, ProbMeasure>> measures = {
      {"uniform", ProbMeasure::uniform()}, {"quarter", ProbMeasure::coin_toss({}, Rational(1, 4))}};
  const std::vector<BitString> pool = strings_upto(cfg.pair_depth);
  const std::size_t n = cfg.pair_depth + 1;
  std::size_t verified = 0;
  for (const auto& [name, nu] : measures) {
    std::vector<SplittingOp> ops;
    for (const BitString& w : pool) ops.push_back(cylinder_measurement(w, nu));
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = 0; j < pool.size(); ++j) {
        const CombinedMeasurements c = combine_pair(ops[i], ops[j]);
        for (const SplittingOp* op : {&c.x, &c.y, &c.intersection, &c.union_}) {
          ++verified;
          const SplitReport report = verify_splitting(*op, unit(), kApplyBits, n);
          if (!report.ok()) {
            return fail(op->provenance() + " under " + name + ": " + report.details.front(),
                        report.budget_slack.to_string());
          }
        }
      }
    }
  }
  return pass(str(verified) + " combined operators verified at depth " + str(n));
}

// Three constructions of the same clopen set: balanced union of cylinder
// measurements, its minimal prefix set, and a refined prefix set.
struct ClopenConstructions {
  SplittingOp composed;
  SplittingOp minimal;
  SplittingOp refined;
};

ClopenConstructions constructions(const ClopenSet& x, const ProbMeasure& nu) {
  return {union_of_cylinders(x.minimal_prefix_set().members(), nu), clopen_measurement(x, nu),
          prefix_set_measurement(PrefixSet(x.selected_at(x.depth() + 1)), nu)};
}

Outcome splitting_classical_agreement(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "splitting.classical_agreement");
  const auto measures = standard_measures();
  const std::size_t n = cfg.samples * 4;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [name, nu] = measures[i % measures.size()];
    const ClopenSet x = random_clopen(rng, draw_upto(rng, cfg.pair_depth));
    const Rational truth = classical_measure(x, nu);
    const SplittingOp op = union_of_cylinders(x.minimal_prefix_set().members(), nu);
    for (unsigned r : kEstimateBits) {
      const MeasureEstimate est = measure_estimate(op, r);
      if (abs(est.plus_value - truth) > p2(1 - static_cast<long>(r)) || truth < est.lower ||
          truth > est.upper) {
        return fail(x.to_string() + " under " + name + " at r=" + str(r) + " estimates " +
                        est.plus_value.to_string() + ", classical " + truth.to_string(),
                    (est.plus_value - truth).to_string());
      }
    }
  }
  return pass(str(n) + " random clopen sets");
}

Outcome splitting_budget_bound(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "splitting.budget_bound");
  const auto measures = standard_measures();
  const std::size_t n = cfg.samples;
  std::size_t built = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [name, nu] = measures[i % measures.size()];
    const ClopenSet x = random_clopen(rng, draw_upto(rng, cfg.pair_depth));
    const ClopenConstructions c = constructions(x, nu);
    for (const SplittingOp* op : {&c.composed, &c.minimal, &c.refined}) {
      const SplittingOp comp = complement(*op);
      for (const SplittingOp* o : {op, &comp}) {
        ++built;
        for (unsigned r : kEstimateBits) {
          const MeasureEstimate est = measure_estimate(*o, r);
          const Rational total = est.plus_value + est.minus_value;
          if (total < Rational(1) || total > Rational(1) + p2(-static_cast<long>(r))) {
            return fail(o->provenance() + " under " + name + " at r=" + str(r) +
                            ": plus + minus = " + total.to_string(),
                        (total - Rational(1)).to_string());
          }
        }
      }
    }
  }
  return pass(str(built) + " clopen measurements");
}

Outcome splitting_construction_agreement(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "splitting.construction_agreement");
  const auto measures = standard_measures();
  auto agree = [](const SplittingOp& a, const SplittingOp& b, unsigned r) {
    return abs(measure_estimate(a, r).plus_value - measure_estimate(b, r).plus_value) <=
           p2(1 - static_cast<long>(r));
  };
  for (const auto& [name, nu] : measures) {
    const SplittingOp direct = cylinder_measurement(BitString("0"), nu);
    const SplittingOp split = union_of_cylinders({BitString("00"), BitString("01")}, nu);
    for (unsigned r : kEstimateBits) {
      if (!agree(direct, split, r)) return fail("C_0 vs C_00 ∪ C_01 under " + name);
    }
  }
  const std::size_t n = cfg.samples;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [name, nu] = measures[i % measures.size()];
    const ClopenSet x = random_clopen(rng, draw_upto(rng, cfg.pair_depth));
    const ClopenConstructions c = constructions(x, nu);
    for (unsigned r : kEstimateBits) {
      if (!agree(c.composed, c.minimal, r) || !agree(c.minimal, c.refined, r)) {
        return fail("constructions of " + x.to_string() + " disagree under " + name +
                    " at r=" + str(r));
      }
    }
  }
  return pass("sibling split plus " + str(n) + " random clopen sets");
}

Outcome splitting_verify_examples(const SuiteConfig&) {
  const ProbMeasure mu = ProbMeasure::uniform();
  const SplittingOp c0 = cylinder_measurement(BitString("0"), mu);
  const SplitReport a = verify_splitting(c0, unit(), 4, 6);
  if (!a.ok()) return fail("cylinder 0: " + a.details.front());
  const SplitReport b = verify_splitting(complement(c0), unit(), 4, 6);
  if (!b.ok()) return fail("complement of cylinder 0: " + b.details.front());
  const SplitReport c = verify_splitting(broken_operator(mu), unit(), 1, 2);
  if (c.budget != CheckStatus::kFail || !(c.budget_slack == Rational(-1, 2))) {
    return fail("broken operator not rejected", c.budget_slack.to_string());
  }
  return pass("cylinder, complement pass; broken operator fails (iii) by 1/2");
}

Outcome splitting_complement(const SuiteConfig&) {
  const ProbMeasure mu = ProbMeasure::uniform();
  const SplittingOp c0 = cylinder_measurement(BitString("0"), mu);
  if (!(measure_estimate(complement(c0), 8).plus_value == Rational(1, 2))) {
    return fail("complement of C_0 does not estimate 1/2");
  }
  if (!measure_estimate(complement(cylinder_measurement(BitString(), mu)), 8).plus_value.is_zero()) {
    return fail("complement of the full space does not estimate 0");
  }
  const SplittingOp twice = complement(complement(c0));
  for (unsigned r : {2u, 6u}) {
    const SplitPair a = c0.apply(r, unit());
    const SplitPair b = twice.apply(r, unit());
    for (const BitString& w : strings_upto(4)) {
      if (!(a.plus.value(w) == b.plus.value(w)) || !(a.minus.value(w) == b.minus.value(w))) {
        return fail("complement is not an involution at " + w.display());
      }
    }
  }
  return pass("estimates and involution");
}

Outcome splitting_completeness(const SuiteConfig&) {
  const ProbMeasure spine = two_spine_measure(6);
  const SplittingOp null_cyl = cylinder_measurement(BitString("01"), spine);
  if (!measure_estimate(completeness_measurement(null_cyl), 8).plus_value.is_zero()) {
    return fail("completeness over a null cylinder does not estimate 0");
  }
  const ProbMeasure mu = ProbMeasure::uniform();
  const SplittingOp via_cover =
      completeness_measurement(success_to_measurement(z3_strong(mu), mu));
  for (unsigned r : kEstimateBits) {
    const MeasureEstimate est = measure_estimate(via_cover, r);
    if (!est.lower.is_zero() || est.upper > p2(-static_cast<long>(r))) {
      return fail("completeness over the z3 success set at r=" + str(r), est.upper.to_string());
    }
  }
  try {
    completeness_measurement(cylinder_measurement(BitString("0"), mu));
    return fail("completeness accepted a non-null evidence operator");
  } catch (const PreconditionError&) {
  }
  return pass("null cylinder, null cover, rejection");
}

Outcome splitting_sequence_disjoint(const SuiteConfig&) {
  const SplittingOp op = sequence_union(spine_family(ProbMeasure::uniform()));
  for (unsigned r : kEstimateBits) {
    const MeasureEstimate est = measure_estimate(op, r);
    if (abs(est.plus_value - Rational(1)) > p2(1 - static_cast<long>(r))) {
      return fail("spine union at r=" + str(r) + " estimates " + est.plus_value.to_string(),
                  (est.plus_value - Rational(1)).to_string());
    }
  }
  return pass("spine union within 2^{1-r} of 1");
}

Outcome splitting_sequence_monotone(const SuiteConfig&) {
  const ProbMeasure mu = ProbMeasure::uniform();
  const ModulatedFamily family = spine_family(mu);
  Rational previous(0);
  for (std::size_t k = 0; k <= 16; ++k) {
    const Rational v = measure_estimate(family.stage(k), 8).plus_value;
    const Rational expected = Rational(1) - p2(-static_cast<long>(k + 1));
    if (v < previous || !(v == expected)) {
      return fail("stage " + str(k) + " estimates " + v.to_string(), (v - expected).to_string());
    }
    previous = v;
  }
  const SplittingOp limit = sequence_union(family);
  Rational last(0);
  for (unsigned r = 2; r <= 16; r += 2) {
    const Rational v = measure_estimate(limit, r).plus_value;
    if (abs(v - Rational(1)) > p2(1 - static_cast<long>(r)) || v < last) {
      return fail("limit at r=" + str(r) + " estimates " + v.to_string(), (v - Rational(1)).to_string());
    }
    last = v;
  }
  return pass("17 stages monotone, limit converges");
}

Outcome splitting_de_morgan(const SuiteConfig&) {
  const ProbMeasure mu = ProbMeasure::uniform();
  const SplittingOp c0 = cylinder_measurement(BitString("0"), mu);
  const SplittingOp as_union = sequence_union(constant_family(c0));
  const SplittingOp as_intersection =
      sequence_intersection(constant_family(c0, Monotonicity::kIntersection));
  const SplittingOp swapped = sequence_intersection(complemented(spine_family(mu)));
  for (unsigned r : kEstimateBits) {
    const Rational tol = p2(1 - static_cast<long>(r));
    const Rational u = measure_estimate(as_union, r).plus_value;
    const Rational i = measure_estimate(as_intersection, r).plus_value;
    if (abs(u - Rational(1, 2)) > tol || abs(i - Rational(1, 2)) > tol) {
      return fail("constant C_0 at r=" + str(r) + ": union " + u.to_string() + ", intersection " +
                  i.to_string());
    }
    const Rational s = measure_estimate(swapped, r).plus_value;
    if (s > tol) return fail("complemented spine intersection at r=" + str(r), s.to_string());
  }
  return pass("constant and spine swaps");
}

Outcome splitting_null_union(const SuiteConfig&) {
  const ProbMeasure spine = two_spine_measure(8);
  auto null_cylinders = [spine](std::size_t j) {
    return cylinder_measurement(BitString("01" + std::string(j, '0')), spine);
  };
  const SplittingOp a = sequence_union(null_sequence_union("null_cylinders", spine, null_cylinders));
  const ProbMeasure mu = ProbMeasure::uniform();
  auto covers_fn = [mu](std::size_t) { return success_to_measurement(z3_strong(mu), mu); };
  const SplittingOp b = sequence_union(null_sequence_union("z3_successes", mu, covers_fn));
  const SplittingOp empty = sequence_union(null_sequence_union("empty", mu, covers_fn, 0));
  for (unsigned r : kEstimateBits) {
    const MeasureEstimate ea = measure_estimate(a, r);
    const MeasureEstimate eb = measure_estimate(b, r);
    const MeasureEstimate ee = measure_estimate(empty, r);
    const Rational tol = p2(-static_cast<long>(r));
    if (!ea.lower.is_zero() || ea.upper > tol) return fail("null cylinders at r=" + str(r), ea.upper.to_string());
    if (!eb.lower.is_zero() || eb.upper > tol) return fail("z3 successes at r=" + str(r), eb.upper.to_string());
    if (!ee.plus_value.is_zero()) return fail("empty family at r=" + str(r), ee.plus_value.to_string());
  }
  return pass("null cylinders, scaled covers, empty family");
}

Outcome splitting_nullcover_roundtrip(const SuiteConfig&) {
  const ProbMeasure mu = ProbMeasure::uniform();
  const Martingale strong = z3_strong(mu);
  if (!(strong.value(BitString()) == Rational(1))) return fail("d(λ) = " + strong.value(BitString()).to_string());
  for (std::size_t n = 0; n <= 10; ++n) {
    const Rational v = strong.value(BitString::zeros(n));
    if (!(v == Rational(static_cast<long>(n + 1)))) {
      return fail("d(0^" + str(n) + ") = " + v.to_string());
    }
  }
  const SplittingOp op = success_to_measurement(strong, mu);
  for (unsigned r = 0; r <= 16; ++r) {
    const MeasureEstimate est = measure_estimate(op, r);
    if (est.plus_value > p2(-static_cast<long>(r))) return fail("estimate above 2^-r at r=" + str(r));
  }
  const NullCover cover = measurement_to_nullcover(op);
  if (const auto r = check_null_cover(cover, 16)) return fail("recovered cover fails at r=" + str(*r));
  const NullCover case_one =
      measurement_to_nullcover(cylinder_measurement(BitString("01"), two_spine_measure(4)));
  if (!case_one.member(3).value(BitString()).is_zero()) return fail("case-I cover not zero");
  try {
    measurement_to_nullcover(cylinder_measurement(BitString("0"), mu));
    return fail("cylinder C_0 accepted as null evidence");
  } catch (const PreconditionError&) {
  }
  return pass("z3 -> strong -> measurement -> cover");
}

Outcome splitting_bicover(const SuiteConfig&) {
  const ProbMeasure mu = ProbMeasure::uniform();
  const Bicover c0 = bicover_from_measurement(cylinder_measurement(BitString("0"), mu));
  if (check_bicover(c0, 16)) return fail("cylinder C_0 bicover bound");
  if (!(c0.plus(5).value(BitString()) == Rational(1, 2)) ||
      !(c0.minus(5).value(BitString()) == Rational(1, 2))) {
    return fail("cylinder C_0 bicover values");
  }
  const Bicover full = bicover_from_measurement(cylinder_measurement(BitString(), mu));
  if (check_bicover(full, 16) || !(full.plus(3).value(BitString()) == Rational(1)) ||
      !full.minus(3).value(BitString()).is_zero()) {
    return fail("full-space bicover");
  }
  const Bicover siblings = bicover_from_measurement(
      combine_pair(cylinder_measurement(BitString("0"), mu), cylinder_measurement(BitString("1"), mu))
          .union_);
  if (const auto r = check_bicover(siblings, 12)) return fail("sibling union bicover at r=" + str(*r));
  return pass("cylinder, full space, sibling union");
}

// ---------------------------------------------------------------------------
// diagonal
// ---------------------------------------------------------------------------

Outcome diagonal_constructor_ladder(const SuiteConfig&) {
  const ConstructorTrace trace =
      conserve_constructor(doubling_ladder(24), ProbMeasure::uniform(), BitString(), 16);
  if (trace.m != 2 || !trace.bounds_hold || trace.rows.size() != 17) {
    return fail("ladder trace: m=" + str(trace.m) + ", bounds " + (trace.bounds_hold ? "hold" : "fail"));
  }
  if (trace.prefix.to_string().substr(0, 4) != "1000") return fail("prefix " + trace.prefix.display());
  for (const TraceRow& row : trace.rows) {
    if (row.value > trace.ceiling) return fail("row " + row.prefix.display() + " above ceiling", row.value.to_string());
  }
  return pass("16 steps, prefix " + trace.prefix.display());
}

Outcome diagonal_constructor_random(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "diagonal.constructor_random");
  const auto measures = standard_measures();
  std::size_t runs = 0;
  for (std::size_t i = 0; i < cfg.samples * 4; ++i) {
    const ProbMeasure& nu = measures[i % measures.size()].second;
    const Martingale d = random_martingale(nu, cfg.depth, rng);
    const BitString w = random_string(rng, draw_upto(rng, 3));
    if (!(d.value(BitString()) < nu.measure_of(w)) || d.value(w) >= Rational(1)) continue;
    ++runs;
    const ConstructorTrace trace = conserve_constructor(d, nu, w, cfg.depth + 4);
    if (!trace.bounds_hold) return fail("bounds fail for subject " + str(i) + " at w=" + w.display());
    for (const TraceRow& row : trace.rows) {
      if (row.value >= Rational(1)) return fail("trace enters the success set at " + row.prefix.display());
    }
  }
  const ConstructorTrace z = conserve_constructor(zero(), ProbMeasure::uniform(), BitString(), 5);
  if (!(z.prefix == BitString::zeros(5))) return fail("zero martingale prefix " + z.prefix.display());
  try {
    conserve_constructor(unit(), ProbMeasure::uniform(), BitString(), 3);
    return fail("unit accepted");
  } catch (const PreconditionError&) {
  }
  return pass(str(runs) + " random runs meet the preconditions");
}

Outcome diagonal_light_leaf(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "diagonal.light_leaf");
  const auto measures = standard_measures();
  const std::size_t n = cfg.samples * 20;
  for (std::size_t i = 0; i < n; ++i) {
    const ProbMeasure& nu = measures[i % measures.size()].second;
    const std::size_t m = 1 + draw_upto(rng, 4);
    const Martingale d = random_martingale(nu, m, rng);
    const BitString u = find_light_leaf(d, m, nu);
    if (d.value(u) > d.value(BitString())) return fail("heavy witness " + u.display());
  }
  if (!(find_light_leaf(doubling_ladder(4), 2) == BitString("01"))) return fail("ladder witness");
  return pass(str(n) + " random martingales");
}

Outcome diagonal_two_sum(const SuiteConfig& cfg) {
  std::mt19937_64 rng = stream(cfg, "diagonal.two_sum");
  const std::vector<ProbMeasure> measures = {standard_measures()[1].second, standard_measures()[2].second};
  const std::size_t n = cfg.samples * 2;
  for (std::size_t i = 0; i < n; ++i) {
    const ProbMeasure& nu = measures[i % 2];
    const std::size_t m = 1 + i % 4;
    const Martingale d = regularize(random_martingale(nu, std::max<std::size_t>(m, cfg.depth), rng), nu);
    const ZeroOneResult z = zero_one_transform(d, nu, m);
    if (!(z.initial_value == z.transformed.value(BitString())) || z.initial_value > z.two_sum_bound) {
      return fail("two-sum bound fails for subject " + str(i), (z.initial_value - z.two_sum_bound).to_string());
    }
  }
  return pass(str(n) + " regular martingales, m <= 4");
}

Outcome diagonal_zero_one_examples(const SuiteConfig& cfg) {
  const ProbMeasure mu = ProbMeasure::uniform();
  const ZeroOneResult ladder = zero_one_transform(regularize(doubling_ladder(12), mu), mu, 1);
  if (!(ladder.context.u == BitString("1")) || !ladder.initial_value.is_zero()) {
    return fail("Λ(ladder) instance: d'(λ) = " + ladder.initial_value.to_string());
  }
  for (const ProbMeasure& nu : {standard_measures()[1].second, standard_measures()[2].second}) {
    const ZeroOneResult z = zero_one_transform(unit(), nu, 3);
    const MartingaleReport rep = verify_martingale(z.transformed, nu, std::min<std::size_t>(6, cfg.depth));
    if (!rep.ok) return fail("zero-one of unit under " + nu.describe());
    for (const BitString& w : strings_upto(4)) {
      if (!(z.transformed.value(w) == Rational(1))) return fail("zero-one of unit differs at " + w.display());
    }
  }
  try {
    zero_one_transform(unit(), two_spine_measure(3), 1);
    return fail("non-product measure accepted");
  } catch (const PreconditionError&) {
  }
  return pass("Λ(ladder) collapses to 0; unit is fixed");
}

// ---------------------------------------------------------------------------
// harness
// ---------------------------------------------------------------------------

Outcome harness_scan_count(const SuiteConfig& cfg) {
  for (std::size_t n = 0; n <= cfg.depth; ++n) {
    const std::size_t expected = (std::size_t{1} << (n + 1)) - 1;
    if (exhaustive_scan_count(n) != expected) return fail("depth " + str(n) + " visits " + str(exhaustive_scan_count(n)));
  }
  return pass("2^{n+1} - 1 strings for n <= " + str(cfg.depth));
}

Outcome harness_generator_determinism(const SuiteConfig& cfg) {
  const ProbMeasure nu = standard_measures()[2].second;
  const Martingale a = random_martingale(nu, cfg.depth, cfg.seed);
  const Martingale b = random_martingale(nu, cfg.depth, cfg.seed);
  std::optional<Outcome> bad;
  for_each_string_below(cfg.depth + 1, [&](const BitString& w) {
    if (!bad && !(a.value(w) == b.value(w))) bad = fail("generator differs at " + w.display());
  });
  if (bad) return *bad;
  std::mt19937_64 r1(cfg.seed), r2(cfg.seed);
  if (!(random_clopen(r1, 5) == random_clopen(r2, 5))) return fail("clopen generator differs");
  return pass("repeated draws agree");
}

Outcome fault_injected(const SuiteConfig&) {
  const SplitReport report = verify_splitting(broken_operator(ProbMeasure::uniform()), unit(), 1, 2);
  if (report.ok()) return pass("broken operator unexpectedly passed");
  return fail("injected broken operator: " + report.details.front(), report.budget_slack.to_string());
}

std::vector<CheckSpec> registry(const SuiteConfig& cfg) {
  std::vector<CheckSpec> specs = {
      {"numerics", "numerics.dyadic_error", numerics_dyadic_error},
      {"numerics", "numerics.dyadic_monotone", numerics_dyadic_monotone},
      {"numerics", "numerics.normalization", numerics_normalization},
      {"cantor", "cantor.enumeration", cantor_enumeration},
      {"cantor", "cantor.de_morgan", cantor_de_morgan},
      {"cantor", "cantor.representation_independence", cantor_representation},
      {"measure", "measure.additivity", measure_additivity},
      {"measure", "measure.half_coin_is_uniform", measure_half_coin},
      {"measure", "measure.positivity_bound", measure_positivity},
      {"measure", "measure.table_validation", measure_table_validation},
      {"martingale", "martingale.robin_hood", martingale_robin_hood},
      {"martingale", "martingale.robin_hood_examples", martingale_robin_hood_examples},
      {"martingale", "martingale.regularize", martingale_regularize},
      {"martingale", "martingale.regularize_examples", martingale_regularize_examples},
      {"martingale", "martingale.prefix_sum_bound", martingale_prefix_sum},
      {"martingale", "martingale.coverage_examples", martingale_coverage_examples},
      {"splitting", "splitting.cylinder_estimates", splitting_cylinder_estimates},
      {"splitting", "splitting.inclusion_exclusion", splitting_inclusion_exclusion},
      {"splitting", "splitting.algebra_closure", splitting_algebra_closure},
      {"splitting", "splitting.classical_agreement", splitting_classical_agreement},
      {"splitting", "splitting.budget_bound", splitting_budget_bound},
      {"splitting", "splitting.construction_agreement", splitting_construction_agreement},
      {"splitting", "splitting.verify_examples", splitting_verify_examples},
      {"splitting", "splitting.complement", splitting_complement},
      {"splitting", "splitting.completeness", splitting_completeness},
      {"splitting", "splitting.sequence_disjoint", splitting_sequence_disjoint},
      {"splitting", "splitting.sequence_monotone", splitting_sequence_monotone},
      {"splitting", "splitting.de_morgan", splitting_de_morgan},
      {"splitting", "splitting.null_union", splitting_null_union},
      {"splitting", "splitting.nullcover_roundtrip", splitting_nullcover_roundtrip},
      {"splitting", "splitting.bicover", splitting_bicover},
      {"diagonal", "diagonal.constructor_ladder", diagonal_constructor_ladder},
      {"diagonal", "diagonal.constructor_random", diagonal_constructor_random},
      {"diagonal", "diagonal.light_leaf", diagonal_light_leaf},
      {"diagonal", "diagonal.two_sum", diagonal_two_sum},
      {"diagonal", "diagonal.zero_one_examples", diagonal_zero_one_examples},
      {"harness", "harness.scan_count", harness_scan_count},
      {"harness", "harness.generator_determinism", harness_generator_determinism},
  };
  add_identity_checks(specs);
  if (cfg.inject_fault) specs.push_back({"harness", "fault.injected_operator", fault_injected});
  return specs;
}

const std::vector<std::string> kModules = {"numerics", "cantor",    "measure", "martingale",
                                           "splitting", "diagonal", "harness"};

}  // namespace

// ---------------------------------------------------------------------------
// Config and report
// ---------------------------------------------------------------------------

SuiteConfig SuiteConfig::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("suite config: ") + e.what());
  }
  if (!doc.is_object()) throw PreconditionError("suite config must be a JSON object");
  SuiteConfig cfg;
  auto need_uint = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_unsigned()) throw PreconditionError("suite config: " + key + " must be a nonnegative integer");
    return v.get<std::uint64_t>();
  };
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      cfg.seed = need_uint(value, key);
    } else if (key == "depth") {
      cfg.depth = need_uint(value, key);
    } else if (key == "pair_depth") {
      cfg.pair_depth = need_uint(value, key);
    } else if (key == "samples") {
      cfg.samples = need_uint(value, key);
    } else if (key == "inject_fault") {
      if (!value.is_boolean()) throw PreconditionError("suite config: inject_fault must be a boolean");
      cfg.inject_fault = value.get<bool>();
    } else if (key == "suite") {
      if (!value.is_string()) throw PreconditionError("suite config: suite must be a string");
      cfg.suite = value.get<std::string>();
    } else {
      throw PreconditionError("suite config: unknown key \"" + key + "\"");
    }
  }
  if (cfg.depth > 12) throw PreconditionError("suite config: depth must be <= 12");
  if (cfg.pair_depth > 6) throw PreconditionError("suite config: pair_depth must be <= 6");
  return cfg;
}

bool VerifyReport::passed() const { return count(CheckStatus::kFail) == 0; }

std::size_t VerifyReport::count(CheckStatus status) const {
  return static_cast<std::size_t>(std::count_if(
      checks.begin(), checks.end(), [status](const CheckResult& c) { return c.status == status; }));
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["schema"] = "rbmeasure/1";
  doc["suite"] = suite;
  doc["seed"] = config.seed;
  doc["config"] = {{"depth", config.depth},
                   {"pair_depth", config.pair_depth},
                   {"samples", config.samples},
                   {"inject_fault", config.inject_fault}};
  doc["passed"] = passed();
  doc["summary"] = {{"pass", count(CheckStatus::kPass)},
                    {"fail", count(CheckStatus::kFail)},
                    {"untestable", count(CheckStatus::kUntestable)},
                    {"total", checks.size()}};
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const CheckResult& c : checks) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    item["status"] = to_string(c.status);
    item["detail"] = c.detail;
    if (!c.residual.empty()) item["residual"] = c.residual;
    list.push_back(std::move(item));
  }
  doc["checks"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string VerifyReport::to_text(bool with_timing) const {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    std::string tag = to_string(c.status);
    std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char ch) { return std::toupper(ch); });
    out << tag << "  " << c.name << "  " << c.detail;
    if (!c.residual.empty()) out << "  [residual " << c.residual << "]";
    if (with_timing) {
      std::ostringstream secs;
      secs.precision(3);
      secs << std::fixed << c.seconds;
      out << "  (" << secs.str() << "s)";
    }
    out << "\n";
  }
  out << "suite " << suite << ": " << count(CheckStatus::kPass) << " passed, "
      << count(CheckStatus::kFail) << " failed, " << count(CheckStatus::kUntestable)
      << " untestable\n";
  return out.str();
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names = {"default"};
  names.insert(names.end(), kModules.begin(), kModules.end());
  return names;
}

VerifyReport run_suite(const SuiteConfig& config) {
  const std::vector<std::string> names = suite_names();
  if (std::find(names.begin(), names.end(), config.suite) == names.end()) {
    throw PreconditionError("unknown suite \"" + config.suite + "\"");
  }
  VerifyReport report;
  report.suite = config.suite;
  report.config = config;
  for (const CheckSpec& spec : registry(config)) {
    const bool selected = config.suite == "default" || config.suite == spec.module ||
                          spec.name.rfind("fault.", 0) == 0;
    if (!selected) continue;
    CheckResult result;
    result.name = spec.name;
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = spec.run(config);
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.status = outcome.status;
    result.detail = std::move(outcome.detail);
    result.residual = std::move(outcome.residual);
    report.checks.push_back(std::move(result));
  }
  std::sort(report.checks.begin(), report.checks.end(),
            [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  return report;
}

}  // namespace rbm
