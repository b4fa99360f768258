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

#include "rbmeasure/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "rbmeasure/diagonal.hpp"
#include "rbmeasure/harness.hpp"
#include "rbmeasure/nullcover.hpp"
#include "rbmeasure/regularity.hpp"
#include "rbmeasure/sequence.hpp"

namespace rbm {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "rbmeasure/1";

std::string where(const std::string& kind, const std::string& name) {
  return kind + " \"" + name + "\"";
}

Rational to_rational(const Json& v, const std::string& context) {
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
  } catch (const PreconditionError& e) {
    throw ConfigError(context + ": " + e.what());
  }
  throw ConfigError(context + ": expected a rational as \"p/q\"");
}

const Json& field(const Json& obj, const char* key, const std::string& context) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(context + ": missing \"" + key + "\"");
  return *it;
}

std::string string_field(const Json& obj, const char* key, const std::string& context) {
  const Json& v = field(obj, key, context);
  if (!v.is_string()) throw ConfigError(context + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

std::string string_or(const Json& obj, const char* key, const std::string& fallback,
                      const std::string& context) {
  return obj.contains(key) ? string_field(obj, key, context) : fallback;
}

std::size_t size_field(const Json& obj, const char* key, const std::string& context) {
  const Json& v = field(obj, key, context);
  if (!v.is_number_unsigned()) {
    throw ConfigError(context + ": \"" + key + "\" must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::size_t size_or(const Json& obj, const char* key, std::size_t fallback,
                    const std::string& context) {
  return obj.contains(key) ? size_field(obj, key, context) : fallback;
}

BitString bits_of(const std::string& text, const std::string& context) {
  try {
    return BitString(text);
  } catch (const PreconditionError& e) {
    throw ConfigError(context + ": " + e.what());
  }
}

std::vector<BitString> string_list(const Json& obj, const char* key, const std::string& context) {
  const Json& v = field(obj, key, context);
  if (!v.is_array()) throw ConfigError(context + ": \"" + key + "\" must be an array");
  std::vector<BitString> out;
  for (const Json& item : v) {
    if (!item.is_string()) throw ConfigError(context + ": \"" + key + "\" entries must be strings");
    out.push_back(bits_of(item.get<std::string>(), context));
  }
  return out;
}

std::map<BitString, Rational> value_table(const Json& obj, const std::string& context) {
  const Json& v = field(obj, "values", context);
  if (!v.is_object()) throw ConfigError(context + ": \"values\" must be an object");
  std::map<BitString, Rational> out;
  for (const auto& [key, value] : v.items()) {
    out[bits_of(key, context)] = to_rational(value, context + " value for \"" + key + "\"");
  }
  return out;
}

ProbMeasure build_measure(const std::string& name, const Json& spec) {
  const std::string ctx = where("measure", name);
  if (!spec.is_object()) throw ConfigError(ctx + ": expected an object");
  const std::string kind = string_field(spec, "kind", ctx);
  try {
    if (kind == "uniform") return ProbMeasure::uniform();
    if (kind == "coin_toss") {
      std::vector<Rational> biases;
      if (spec.contains("biases")) {
        const Json& list = spec["biases"];
        if (!list.is_array()) throw ConfigError(ctx + ": \"biases\" must be an array");
        for (const Json& b : list) biases.push_back(to_rational(b, ctx));
      }
      const Rational tail =
          spec.contains("tail") ? to_rational(spec["tail"], ctx) : Rational(1, 2);
      return ProbMeasure::coin_toss(std::move(biases), tail);
    }
    if (kind == "table") {
      const std::string ext = string_or(spec, "extension", "proportional", ctx);
      if (ext != "proportional" && ext != "none") {
        throw ConfigError(ctx + ": extension must be \"proportional\" or \"none\"");
      }
      return ProbMeasure::table(size_field(spec, "depth", ctx), value_table(spec, ctx),
                                ext == "none" ? TableExtension::kNone
                                              : TableExtension::kProportional);
    }
    if (kind == "two_spine") return two_spine_measure(size_or(spec, "depth", 8, ctx));
  } catch (const ConfigError&) {
    throw;
  } catch (const PreconditionError& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
  throw ConfigError(ctx + ": unknown kind \"" + kind + "\"");
}

OJson envelope(const std::string& action) {
  OJson doc;
  doc["schema"] = kSchema;
  doc["action"] = action;
  return doc;
}

std::string dump(const OJson& doc) { return doc.dump(2) + "\n"; }

}  // namespace

struct Pipeline::State {
  Json martingale_specs = Json::object();
  Json operator_specs = Json::object();
  std::map<std::string, ProbMeasure> measures;
  std::map<std::string, Martingale> martingales;
  std::map<std::string, SplittingOp> operators;
  std::vector<ActionRequest> commands;
  std::vector<std::string> resolving;

  void enter(const std::string& key) {
    if (std::find(resolving.begin(), resolving.end(), key) != resolving.end()) {
      std::string cycle;
      for (const std::string& k : resolving) cycle += k + " -> ";
      throw ConfigError("reference cycle: " + cycle + key);
    }
    resolving.push_back(key);
  }

  ProbMeasure measure_ref(const Json& spec, const std::string& ctx) const {
    const std::string name = string_or(spec, "measure", "mu", ctx);
    const auto it = measures.find(name);
    if (it == measures.end()) throw ConfigError(ctx + ": unknown measure \"" + name + "\"");
    return it->second;
  }

  Martingale martingale(const std::string& name) {
    if (const auto it = martingales.find(name); it != martingales.end()) return it->second;
    if (!martingale_specs.contains(name)) throw ConfigError("unknown martingale \"" + name + "\"");
    enter("martingale:" + name);
    Martingale built = build_martingale(name, martingale_specs[name]);
    resolving.pop_back();
    return martingales.emplace(name, std::move(built)).first->second;
  }

  SplittingOp op(const std::string& name) {
    if (const auto it = operators.find(name); it != operators.end()) return it->second;
    if (!operator_specs.contains(name)) throw ConfigError("unknown operator \"" + name + "\"");
    enter("operator:" + name);
    SplittingOp built = build_operator(name, operator_specs[name]);
    resolving.pop_back();
    return operators.emplace(name, std::move(built)).first->second;
  }

  Martingale build_martingale(const std::string& name, const Json& spec) {
    const std::string ctx = where("martingale", name);
    if (!spec.is_object()) throw ConfigError(ctx + ": expected an object");
    const std::string type = string_field(spec, "type", ctx);
    auto ref = [&](const char* key) { return martingale(string_field(spec, key, ctx)); };
    try {
      if (type == "unit") return unit();
      if (type == "zero") return zero();
      if (type == "constant") return constant(to_rational(field(spec, "value", ctx), ctx));
      if (type == "table") return table(value_table(spec, ctx), name);
      if (type == "scale") return scale(to_rational(field(spec, "factor", ctx), ctx), ref("of"));
      if (type == "sum") {
        const Json& terms = field(spec, "terms", ctx);
        if (!terms.is_array()) throw ConfigError(ctx + ": \"terms\" must be an array");
        std::vector<Martingale> parts;
        for (const Json& t : terms) {
          if (!t.is_string()) throw ConfigError(ctx + ": terms must be martingale names");
          parts.push_back(martingale(t.get<std::string>()));
        }
        return sum(std::move(parts));
      }
      if (type == "difference") return difference(ref("left"), ref("right"));
      if (type == "prefix_set") {
        return from_prefix_set(PrefixSet(string_list(spec, "members", ctx)), measure_ref(spec, ctx));
      }
      if (type == "indicator") return indicator(bits_of(string_field(spec, "w", ctx), ctx));
      if (type == "z3_ladder") {
        return z3_ladder(static_cast<unsigned>(size_field(spec, "r", ctx)), measure_ref(spec, ctx));
      }
      if (type == "doubling_ladder") return doubling_ladder(size_or(spec, "depth", 24, ctx));
      if (type == "regularize") return regularize(ref("of"), measure_ref(spec, ctx));
      if (type == "zero_one") {
        return zero_one_transform(ref("of"), measure_ref(spec, ctx), size_field(spec, "m", ctx))
            .transformed;
      }
      if (type == "null_cover_sum" || type == "null_cover_truncation") {
        const std::string cover = string_or(spec, "cover", "z3", ctx);
        if (cover != "z3") throw ConfigError(ctx + ": unknown cover \"" + cover + "\"");
        const NullCover c = z3_cover(measure_ref(spec, ctx));
        if (type == "null_cover_sum") return null_cover_to_strong(c);
        return null_cover_truncation(c, static_cast<unsigned>(size_field(spec, "R", ctx)));
      }
      if (type == "nullcover_member") {
        const NullCover c = measurement_to_nullcover(op(string_field(spec, "operator", ctx)));
        return c.member(static_cast<unsigned>(size_field(spec, "r", ctx)));
      }
      if (type == "split") {
        const std::string part = string_or(spec, "part", "plus", ctx);
        if (part != "plus" && part != "minus") {
          throw ConfigError(ctx + ": part must be \"plus\" or \"minus\"");
        }
        const Martingale of = spec.contains("of") ? ref("of") : unit();
        const SplitPair pair = op(string_field(spec, "operator", ctx))
                                   .apply(static_cast<unsigned>(size_or(spec, "r", 4, ctx)), of);
        return part == "plus" ? pair.plus : pair.minus;
      }
      if (type == "random") {
        return random_martingale(measure_ref(spec, ctx), size_or(spec, "depth", 8, ctx),
                                 static_cast<std::uint64_t>(size_or(spec, "seed", 1, ctx)));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const PreconditionError& e) {
      throw ConfigError(ctx + ": " + e.what());
    }
    throw ConfigError(ctx + ": unknown type \"" + type + "\"");
  }

  SplittingOp build_operator(const std::string& name, const Json& spec) {
    const std::string ctx = where("operator", name);
    if (!spec.is_object()) throw ConfigError(ctx + ": expected an object");
    const std::string type = string_field(spec, "type", ctx);
    auto ref = [&](const char* key) { return op(string_field(spec, key, ctx)); };
    try {
      if (type == "cylinder") {
        return cylinder_measurement(bits_of(string_or(spec, "w", "", ctx), ctx),
                                    measure_ref(spec, ctx));
      }
      if (type == "prefix_set") {
        return prefix_set_measurement(PrefixSet(string_list(spec, "members", ctx)),
                                      measure_ref(spec, ctx));
      }
      if (type == "clopen") {
        return clopen_measurement(ClopenSet::from_strings(string_list(spec, "strings", ctx)),
                                  measure_ref(spec, ctx));
      }
      if (type == "complement") return complement(ref("of"));
      if (type == "combine") {
        const CombinedMeasurements c = combine_pair(ref("left"), ref("right"));
        const std::string part = string_or(spec, "part", "union", ctx);
        if (part == "union") return c.union_;
        if (part == "intersection") return c.intersection;
        if (part == "x") return c.x;
        if (part == "y") return c.y;
        throw ConfigError(ctx + ": part must be union, intersection, x or y");
      }
      if (type == "sequence") {
        const std::string family = string_field(spec, "family", ctx);
        const std::string mode = string_or(spec, "mode", "union", ctx);
        if (mode != "union" && mode != "intersection") {
          throw ConfigError(ctx + ": mode must be \"union\" or \"intersection\"");
        }
        if (family == "spine") {
          const ModulatedFamily f = spine_family(measure_ref(spec, ctx));
          return mode == "union" ? sequence_union(f) : sequence_intersection(complemented(f));
        }
        if (family == "constant") {
          const SplittingOp base = ref("of");
          return mode == "union"
                     ? sequence_union(constant_family(base))
                     : sequence_intersection(constant_family(base, Monotonicity::kIntersection));
        }
        throw ConfigError(ctx + ": family must be \"spine\" or \"constant\"");
      }
      if (type == "null_union") {
        const Json& list = field(spec, "members", ctx);
        if (!list.is_array()) throw ConfigError(ctx + ": \"members\" must be an array");
        std::vector<SplittingOp> members;
        for (const Json& m : list) {
          if (!m.is_string()) throw ConfigError(ctx + ": members must be operator names");
          members.push_back(op(m.get<std::string>()));
        }
        const std::size_t count = members.size();
        return sequence_union(null_sequence_union(
            name, measure_ref(spec, ctx),
            [members](std::size_t j) { return members[std::min(j, members.size() - 1)]; },
            count));
      }
      if (type == "completeness") return completeness_measurement(ref("of"));
      if (type == "success") {
        return success_to_measurement(martingale(string_field(spec, "martingale", ctx)),
                                      measure_ref(spec, ctx));
      }
      if (type == "broken") return broken_operator(measure_ref(spec, ctx));
    } catch (const ConfigError&) {
      throw;
    } catch (const PreconditionError& e) {
      throw ConfigError(ctx + ": " + e.what());
    }
    throw ConfigError(ctx + ": unknown type \"" + type + "\"");
  }
};

namespace {

ActionRequest action_from_json(const Json& v) {
  if (!v.is_object()) throw ConfigError("command: expected an object");
  ActionRequest req;
  const std::string ctx = "command";
  for (const auto& [key, value] : v.items()) {
    auto text = [&]() {
      if (!value.is_string()) throw ConfigError(ctx + ": \"" + key + "\" must be a string");
      return value.get<std::string>();
    };
    auto count = [&]() {
      if (!value.is_number_unsigned()) {
        throw ConfigError(ctx + ": \"" + key + "\" must be a nonnegative integer");
      }
      return value.get<std::size_t>();
    };
    auto flag = [&]() {
      if (!value.is_boolean()) throw ConfigError(ctx + ": \"" + key + "\" must be a boolean");
      return value.get<bool>();
    };
    if (key == "action") req.action = text();
    else if (key == "martingale") req.martingale = text();
    else if (key == "operator") req.op = text();
    else if (key == "measure") req.measure = text();
    else if (key == "w") req.w = text();
    else if (key == "precision") req.precision = static_cast<unsigned>(count());
    else if (key == "depth") req.depth = count();
    else if (key == "steps") req.steps = count();
    else if (key == "m") req.m = count();
    else if (key == "seed") req.seed = count();
    else if (key == "samples") req.samples = count();
    else if (key == "pair_depth") req.pair_depth = count();
    else if (key == "suite") req.suite = text();
    else if (key == "inject_fault") req.inject_fault = flag();
    else throw ConfigError(ctx + ": unknown key \"" + key + "\"");
  }
  if (req.action.empty()) throw ConfigError(ctx + ": missing \"action\"");
  return req;
}

}  // namespace

ActionRequest parse_action(std::string_view json_object_text) {
  try {
    return action_from_json(Json::parse(json_object_text));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("command: ") + e.what());
  }
}

Pipeline::Pipeline() : state_(std::make_shared<State>()) {
  state_->measures.emplace("mu", ProbMeasure::uniform());
  state_->martingales.emplace("unit", unit());
  state_->martingales.emplace("zero", zero());
}

Pipeline Pipeline::from_json_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "measures" && key != "martingales" && key != "operators" && key != "commands") {
      throw ConfigError("config: unknown section \"" + key + "\"");
    }
    const bool is_list = key == "commands";
    if (is_list ? !value.is_array() : !value.is_object()) {
      throw ConfigError("config: section \"" + key + "\" has the wrong shape");
    }
  }
  Pipeline p;
  State& s = *p.state_;
  if (doc.contains("measures")) {
    for (const auto& [name, spec] : doc["measures"].items()) {
      s.measures.insert_or_assign(name, build_measure(name, spec));
    }
  }
  if (doc.contains("martingales")) {
    for (const auto& [name, spec] : doc["martingales"].items()) {
      if (s.martingales.count(name)) throw ConfigError("martingale \"" + name + "\" is built in");
      s.martingale_specs[name] = spec;
    }
  }
  if (doc.contains("operators")) s.operator_specs = doc["operators"];
  for (const auto& [name, spec] : s.martingale_specs.items()) {
    static_cast<void>(spec);
    s.martingale(name);
  }
  for (const auto& [name, spec] : s.operator_specs.items()) {
    static_cast<void>(spec);
    s.op(name);
  }
  if (doc.contains("commands")) {
    for (const Json& c : doc["commands"]) s.commands.push_back(action_from_json(c));
  }
  return p;
}

ProbMeasure Pipeline::measure(const std::string& name) const {
  const auto it = state_->measures.find(name);
  if (it == state_->measures.end()) throw ConfigError("unknown measure \"" + name + "\"");
  return it->second;
}

Martingale Pipeline::martingale(const std::string& name) const {
  const auto it = state_->martingales.find(name);
  if (it == state_->martingales.end()) throw ConfigError("unknown martingale \"" + name + "\"");
  return it->second;
}

SplittingOp Pipeline::op(const std::string& name) const {
  const auto it = state_->operators.find(name);
  if (it == state_->operators.end()) throw ConfigError("unknown operator \"" + name + "\"");
  return it->second;
}

namespace {

template <typename Map>
std::vector<std::string> keys(const Map& m) {
  std::vector<std::string> out;
  for (const auto& entry : m) out.push_back(entry.first);
  return out;
}

std::string status_word(bool ok) { return ok ? "pass" : "fail"; }

std::string render_value(const Evaluation& e) {
  if (e.exact) return e.value.to_string();
  return e.approx.to_string() + " (±2^-" + std::to_string(e.approx.precision_bits) + ")";
}

}  // namespace

std::vector<std::string> Pipeline::measure_names() const { return keys(state_->measures); }
std::vector<std::string> Pipeline::martingale_names() const { return keys(state_->martingales); }
std::vector<std::string> Pipeline::operator_names() const { return keys(state_->operators); }
const std::vector<ActionRequest>& Pipeline::commands() const { return state_->commands; }

ActionResult Pipeline::run(const ActionRequest& req) const {
  ActionResult result;
  OJson doc = envelope(req.action);
  std::ostringstream text;
  const BitString lambda;
  auto need = [&](const std::string& value, const char* what) {
    if (value.empty()) throw ConfigError(req.action + ": missing " + what);
    return value;
  };
  try {
    if (req.action == "eval") {
      const Martingale d = martingale(need(req.martingale, "martingale"));
      const BitString w = bits_of(req.w, "eval");
      const unsigned r = req.precision.value_or(16);
      const Evaluation e = d.evaluate(w, r);
      doc["martingale"] = req.martingale;
      doc["w"] = w.to_string();
      doc["exact"] = e.exact;
      doc["value"] = e.exact ? e.value.to_string() : e.approx.to_string();
      if (!e.exact) doc["precision"] = r;
      text << req.martingale << "(" << w.display() << ") = " << render_value(e) << "\n";
    } else if (req.action == "measure") {
      const SplittingOp phi = op(need(req.op, "operator"));
      const unsigned r = req.precision.value_or(10);
      const MeasureEstimate est = measure_estimate(phi, r);
      doc["operator"] = req.op;
      doc["precision"] = r;
      doc["lower"] = est.lower.to_string();
      doc["upper"] = est.upper.to_string();
      doc["plus"] = est.plus_value.to_string();
      doc["minus"] = est.minus_value.to_string();
      doc["exact"] = est.exact;
      doc["consistent"] = est.consistent;
      text << req.op << " at r=" << r << ": [" << est.lower << ", " << est.upper << "]"
           << (est.exact ? "" : " (approximate)") << "\n";
      if (!est.consistent) {
        text << "warning: complementary estimate disagrees beyond 2^{1-r}\n";
        result.status = ExitStatus::kVerificationFailure;
      }
    } else if (req.action == "split") {
      const SplittingOp phi = op(need(req.op, "operator"));
      const Martingale d = req.martingale.empty() ? unit() : martingale(req.martingale);
      const unsigned r = req.precision.value_or(4);
      const std::size_t n = req.depth.value_or(6);
      const SplitReport rep = verify_splitting(phi, d, r, n);
      doc["operator"] = req.op;
      doc["martingale"] = req.martingale.empty() ? "unit" : req.martingale;
      doc["precision"] = r;
      doc["depth"] = n;
      doc["budget"] = to_string(rep.budget);
      doc["budget_slack"] = rep.budget_slack.to_string();
      doc["cover_plus"] = to_string(rep.cover_plus);
      doc["cover_minus"] = to_string(rep.cover_minus);
      doc["plus_identity"] = to_string(rep.plus_identity);
      doc["minus_identity"] = to_string(rep.minus_identity);
      doc["ok"] = rep.ok();
      doc["details"] = rep.details;
      text << "split " << req.op << " at r=" << r << ", depth " << n << "\n"
           << "  (iii) budget:       " << to_string(rep.budget) << " (slack " << rep.budget_slack
           << ")\n"
           << "  (i) cover plus:     " << to_string(rep.cover_plus) << "\n"
           << "  (ii) cover minus:   " << to_string(rep.cover_minus) << "\n"
           << "  plus martingale:    " << to_string(rep.plus_identity) << "\n"
           << "  minus martingale:   " << to_string(rep.minus_identity) << "\n";
      for (const std::string& detail : rep.details) text << "  note: " << detail << "\n";
      if (!rep.ok()) result.status = ExitStatus::kVerificationFailure;
    } else if (req.action == "regularize") {
      const Martingale d = martingale(need(req.martingale, "martingale"));
      const ProbMeasure nu = measure(req.measure);
      const std::size_t n = req.depth.value_or(8);
      const Martingale ld = regularize(d, nu);
      const MartingaleReport identity = verify_martingale(ld, nu, n);
      const RegularityReport regular = check_regularity(ld, n);
      const RegularityReport contain = check_success_containment(d, ld, nu, n);
      const bool ok = identity.ok && regular.ok && contain.ok;
      OJson rows = OJson::array();
      for_each_string_below(std::min<std::size_t>(n, 3) + 1, [&](const BitString& w) {
        rows.push_back({{"w", w.to_string()}, {"value", ld.value(w).to_string()}});
      });
      doc["martingale"] = req.martingale;
      doc["measure"] = nu.describe();
      doc["depth"] = n;
      doc["identity"] = status_word(identity.ok);
      doc["regularity"] = status_word(regular.ok);
      doc["containment"] = status_word(contain.ok);
      doc["rows"] = std::move(rows);
      text << "Λ(" << req.martingale << ") over " << nu.describe() << ", depth " << n << "\n"
           << "  martingale identity: " << status_word(identity.ok) << "\n"
           << "  regularity:          " << status_word(regular.ok) << " (" << regular.pairs_checked
           << " pairs)\n"
           << "  success containment: " << status_word(contain.ok) << "\n";
      for_each_string_below(std::min<std::size_t>(n, 3) + 1, [&](const BitString& w) {
        text << "  " << w.display() << "\t" << ld.value(w) << "\n";
      });
      if (!ok) result.status = ExitStatus::kVerificationFailure;
    } else if (req.action == "diagonalize") {
      const Martingale d = martingale(need(req.martingale, "martingale"));
      const ProbMeasure nu = measure(req.measure);
      const BitString w = bits_of(req.w, "diagonalize");
      const std::size_t steps = req.steps.value_or(16);
      const ConstructorTrace trace = conserve_constructor(d, nu, w, steps);
      OJson rows = OJson::array();
      text << "diagonalize " << req.martingale << " from w=" << w.display() << ", m=" << trace.m
           << ", ceiling " << trace.ceiling << "\n";
      for (const TraceRow& row : trace.rows) {
        OJson item{{"prefix", row.prefix.to_string()}, {"value", row.value.to_string()}};
        text << "  " << row.prefix.display() << "\t" << row.value;
        if (row.bound) {
          item["bound"] = row.bound->to_string();
          text << "\t<= " << *row.bound;
        }
        text << "\n";
        rows.push_back(std::move(item));
      }
      text << "prefix " << trace.prefix.display() << ", bounds "
           << (trace.bounds_hold ? "hold" : "violated") << "\n";
      doc["martingale"] = req.martingale;
      doc["w"] = w.to_string();
      doc["m"] = trace.m;
      doc["ceiling"] = trace.ceiling.to_string();
      doc["prefix"] = trace.prefix.to_string();
      doc["bounds_hold"] = trace.bounds_hold;
      doc["rows"] = std::move(rows);
      if (!trace.bounds_hold) result.status = ExitStatus::kVerificationFailure;
    } else if (req.action == "zero-one") {
      const Martingale d = martingale(need(req.martingale, "martingale"));
      const ProbMeasure nu = measure(req.measure);
      const std::size_t m = req.m.value_or(2);
      const std::size_t n = req.depth.value_or(6);
      const ZeroOneResult z = zero_one_transform(d, nu, m);
      const MartingaleReport identity = verify_martingale(z.transformed, nu, n);
      const bool bound_ok = z.initial_value <= z.two_sum_bound;
      auto names = [](const std::vector<BitString>& v) {
        std::vector<std::string> out;
        for (const BitString& s : v) out.push_back(s.to_string());
        return out;
      };
      doc["martingale"] = req.martingale;
      doc["m"] = m;
      doc["u"] = z.context.u.to_string();
      doc["light"] = names(z.context.light);
      doc["heavy"] = names(z.context.heavy);
      doc["initial_value"] = z.initial_value.to_string();
      doc["two_sum_bound"] = z.two_sum_bound.to_string();
      doc["bound_holds"] = bound_ok;
      doc["identity"] = status_word(identity.ok);
      text << "zero-one " << req.martingale << ", m=" << m << ", u=" << z.context.u.display()
           << "\n  |I_m| = " << z.context.light.size() << ", |J_m| = " << z.context.heavy.size()
           << "\n  d'(λ) = " << z.initial_value << " <= " << z.two_sum_bound << ": "
           << status_word(bound_ok) << "\n  identity at depth " << n << ": "
           << status_word(identity.ok) << "\n";
      if (!bound_ok || !identity.ok) result.status = ExitStatus::kVerificationFailure;
    } else if (req.action == "identity") {
      const Martingale d = martingale(need(req.martingale, "martingale"));
      const ProbMeasure nu = measure(req.measure);
      const std::size_t n = req.depth.value_or(8);
      const MartingaleReport rep = verify_martingale(d, nu, n);
      doc["martingale"] = req.martingale;
      doc["measure"] = nu.describe();
      doc["depth"] = n;
      doc["ok"] = rep.ok;
      doc["exact"] = rep.exact;
      doc["strings_visited"] = rep.strings_visited;
      if (!rep.ok) {
        doc["violation"] = {{"w", rep.violations.front().w.to_string()},
                            {"kind", rep.violations.front().kind},
                            {"residual", rep.violations.front().residual.to_string()}};
      }
      text << req.martingale << " over " << nu.describe() << ", depth " << n << ": "
           << status_word(rep.ok) << " (" << rep.strings_visited << " strings)\n";
      if (!rep.ok) {
        text << "  " << rep.violations.front().kind << " violation at "
             << rep.violations.front().w.display() << ", residual "
             << rep.violations.front().residual << "\n";
        result.status = ExitStatus::kVerificationFailure;
      }
    } else if (req.action == "verify") {
      SuiteConfig cfg;
      if (req.seed) cfg.seed = *req.seed;
      if (req.depth) cfg.depth = *req.depth;
      if (req.pair_depth) cfg.pair_depth = *req.pair_depth;
      if (req.samples) cfg.samples = *req.samples;
      cfg.suite = req.suite;
      cfg.inject_fault = req.inject_fault;
      const VerifyReport report = run_suite(cfg);
      result.json = report.to_json();
      result.text = report.to_text(req.timing);
      result.status = report.passed() ? ExitStatus::kOk : ExitStatus::kVerificationFailure;
      return result;
    } else {
      throw ConfigError("unknown action \"" + req.action + "\"");
    }
  } catch (const PreconditionError& e) {
    result.status = ExitStatus::kUsage;
    doc["error"] = e.what();
    result.json = dump(doc);
    result.text = std::string("error: ") + e.what() + "\n";
    return result;
  } catch (const EvaluationError& e) {
    result.status = ExitStatus::kVerificationFailure;
    doc["error"] = e.what();
    result.json = dump(doc);
    result.text = std::string("evaluation error: ") + e.what() + "\n";
    return result;
  }
  result.json = dump(doc);
  result.text = text.str();
  return result;
}

}  // namespace rbm
