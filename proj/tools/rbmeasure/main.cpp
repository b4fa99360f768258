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

// rbmeasure: evaluate martingales, estimate measurements, run constructions
// and the verification suites from pipeline documents.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rbmeasure/harness.hpp"
#include "rbmeasure/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format = "text";
  rbm::ActionRequest request;
  std::size_t depth = 0;
  std::size_t pair_depth = 0;
  unsigned precision = 0;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::size_t m = 0;
  std::size_t samples = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rbm::ConfigError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot write " << opt.out << "\n";
    return static_cast<int>(rbm::ExitStatus::kUsage);
  }
  file << text;
  return 0;
}

int finish(const Options& opt, const rbm::ActionResult& result) {
  const std::string& body = opt.format == "json" ? result.json : result.text;
  if (result.status == rbm::ExitStatus::kUsage && opt.format != "json") {
    std::cerr << body;
    return static_cast<int>(result.status);
  }
  if (const int rc = emit(opt, body)) return rc;
  return static_cast<int>(result.status);
}

rbm::Pipeline load(const Options& opt) {
  if (opt.config.empty()) return rbm::Pipeline();
  return rbm::Pipeline::from_json_text(read_file(opt.config));
}

int run_commands(const Options& opt) {
  const rbm::Pipeline pipeline = load(opt);
  int worst = 0;
  std::string text;
  nlohmann::ordered_json doc;
  doc["schema"] = "rbmeasure/1";
  doc["results"] = nlohmann::ordered_json::array();
  for (const rbm::ActionRequest& req : pipeline.commands()) {
    const rbm::ActionResult r = pipeline.run(req);
    worst = std::max(worst, static_cast<int>(r.status));
    text += r.text;
    doc["results"].push_back(nlohmann::ordered_json::parse(r.json));
  }
  if (const int rc = emit(opt, opt.format == "json" ? doc.dump(2) + "\n" : text)) return rc;
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rbmeasure: resource-bounded measure constructions and checks"};
  app.require_subcommand(1);
  Options opt;

  app.add_option("--config", opt.config, "Pipeline document (suite config for verify)");
  app.add_option("--out", opt.out, "Write output to this file instead of stdout");
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));

  auto common = [&](CLI::App* sub, const char* config_help = "Pipeline document") {
    sub->add_option("--config", opt.config, config_help);
    sub->add_option("--out", opt.out, "Output file");
    sub->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto martingale_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("-d,--martingale", opt.request.martingale, "Martingale name");
    if (required) o->required();
  };
  auto measure_opt = [&](CLI::App* sub) {
    sub->add_option("--measure", opt.request.measure, "Measure name")->capture_default_str();
  };
  auto depth_opt = [&](CLI::App* sub) { sub->add_option("--depth", opt.depth, "Scan depth"); };
  auto precision_opt = [&](CLI::App* sub) {
    sub->add_option("--precision", opt.precision, "Precision bits r");
  };

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a martingale at a string");
  common(eval);
  martingale_opt(eval, true);
  eval->add_option("-w,--string", opt.request.w, "Binary string (empty for λ)");
  precision_opt(eval);

  CLI::App* measure = app.add_subcommand("measure", "Estimate the measure of an operator's target");
  common(measure);
  measure->add_option("--operator", opt.request.op, "Operator name")->required();
  precision_opt(measure);

  CLI::App* split = app.add_subcommand("split", "Verify a splitting operator at finite depth");
  common(split);
  split->add_option("--operator", opt.request.op, "Operator name")->required();
  martingale_opt(split, false);
  precision_opt(split);
  depth_opt(split);

  CLI::App* regularize = app.add_subcommand("regularize", "Regularize a martingale and check it");
  common(regularize);
  martingale_opt(regularize, true);
  measure_opt(regularize);
  depth_opt(regularize);

  CLI::App* diagonalize = app.add_subcommand("diagonalize", "Run the diagonalizing constructor");
  common(diagonalize);
  martingale_opt(diagonalize, true);
  measure_opt(diagonalize);
  diagonalize->add_option("-w,--string", opt.request.w, "Start string w");
  diagonalize->add_option("--steps", opt.steps, "Number of steps");

  CLI::App* zero_one = app.add_subcommand("zero-one", "Apply the zero-one-law transform");
  common(zero_one);
  martingale_opt(zero_one, true);
  measure_opt(zero_one);
  zero_one->add_option("-m,--block", opt.m, "Block length m");
  depth_opt(zero_one);

  CLI::App* identity = app.add_subcommand("identity", "Check the martingale identity exhaustively");
  common(identity);
  martingale_opt(identity, true);
  measure_opt(identity);
  depth_opt(identity);

  CLI::App* verify = app.add_subcommand("verify", "Run the property suites");
  common(verify, "Suite configuration (seed, depth, pair_depth, samples, suite)");
  depth_opt(verify);
  verify->add_option("--seed", opt.seed, "Random seed");
  verify->add_option("--samples", opt.samples, "Random subjects per check");
  verify->add_option("--pair-depth", opt.pair_depth, "Depth of operator-pair matrices");
  verify->add_option("--suite", opt.request.suite, "Suite name")
      ->check(CLI::IsMember(rbm::suite_names()));
  verify->add_flag("--inject-fault", opt.request.inject_fault, "Add a known-broken operator");
  verify->add_flag("--timing", opt.request.timing, "Per-check timing in text output");

  CLI::App* run = app.add_subcommand("run", "Execute the commands listed in --config");
  common(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(rbm::ExitStatus::kUsage);
  }

  rbm::ActionRequest& req = opt.request;
  auto count_of = [](CLI::App* sub, const char* name) {
    const CLI::Option* o = sub->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  try {
    if (run->parsed()) return run_commands(opt);

    CLI::App* chosen = app.get_subcommands().front();
    req.action = chosen->get_name();
    if (count_of(chosen, "--depth")) req.depth = opt.depth;
    if (chosen == eval || chosen == measure || chosen == split) {
      if (count_of(chosen, "--precision")) req.precision = opt.precision;
    }
    if (chosen == diagonalize && count_of(chosen, "--steps")) req.steps = opt.steps;
    if (chosen == zero_one && count_of(chosen, "--block")) req.m = opt.m;

    if (chosen == verify) {
      rbm::SuiteConfig cfg;
      if (!opt.config.empty()) cfg = rbm::SuiteConfig::from_json_text(read_file(opt.config));
      req.seed = count_of(verify, "--seed") ? opt.seed : cfg.seed;
      req.depth = req.depth.value_or(cfg.depth);
      req.pair_depth = count_of(verify, "--pair-depth") ? opt.pair_depth : cfg.pair_depth;
      req.samples = count_of(verify, "--samples") ? opt.samples : cfg.samples;
      if (!count_of(verify, "--suite")) req.suite = cfg.suite;
      req.inject_fault = req.inject_fault || cfg.inject_fault;
      return finish(opt, rbm::Pipeline().run(req));
    }
    return finish(opt, load(opt).run(req));
  } catch (const rbm::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(rbm::ExitStatus::kUsage);
  } catch (const rbm::EvaluationError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return static_cast<int>(rbm::ExitStatus::kVerificationFailure);
  }
}
