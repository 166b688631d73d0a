// Copyright 2026 The Csys Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// csys — checks XMI model documents against controlling-automaton rules,
// and decides raw-string membership for grammar/control systems.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "csys/csystem.hpp"
#include "csys/report.hpp"
#include "csys/rules.hpp"

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> rule_search_dirs() {
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("CSYS_RULE_PATH")) {
    std::string value = env;
    std::size_t begin = 0;
    while (begin <= value.size()) {
      std::size_t end = value.find(':', begin);
      if (end == std::string::npos) end = value.size();
      if (end > begin) dirs.push_back(value.substr(begin, end - begin));
      begin = end + 1;
    }
  }
  return dirs;
}

// A --rule argument is a built-in id, a path, or a name found (with or
// without the .rule suffix) in a CSYS_RULE_PATH directory.
csys::ControllingAutomaton resolve_rule(const std::string& arg,
                                        const csys::RuleConfig& config) {
  if (csys::is_builtin_rule(arg)) return csys::make_builtin_rule(arg, config);
  std::vector<std::string> candidates = {arg};
  for (const std::string& dir : rule_search_dirs()) {
    candidates.push_back(dir + "/" + arg);
    candidates.push_back(dir + "/" + arg + ".rule");
  }
  for (const std::string& candidate : candidates) {
    if (!std::filesystem::exists(candidate)) continue;
    std::optional<std::string> source = read_file(candidate);
    if (!source) break;
    return csys::compile_rule(*source);
  }
  throw csys::InvalidArgument("rule '" + arg +
                              "' is neither a built-in id nor a readable "
                              "rule file");
}

struct CheckArgs {
  std::vector<std::string> files;
  std::vector<std::string> rule_args;
  std::size_t max_attrs = 30;
  std::string format = "text";
  bool trace = false;
  bool no_normalize = false;
};

int run_check(const CheckArgs& args) {
  csys::RuleConfig config;
  config.max_attributes = args.max_attrs;

  std::vector<csys::ControllingAutomaton> rules;
  try {
    if (args.rule_args.empty()) {
      rules = csys::make_rules(config);
    } else {
      for (const std::string& arg : args.rule_args) {
        rules.push_back(resolve_rule(arg, config));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "csys: " << e.what() << "\n";
    return 2;
  }

  csys::CheckOptions options;
  options.normalize = !args.no_normalize;
  options.collect_trace = args.trace;

  std::vector<std::future<csys::Report>> futures;
  futures.reserve(args.files.size());
  for (const std::string& file : args.files) {
    futures.push_back(std::async(std::launch::async, [&, file] {
      return csys::check_model(file, rules, options);
    }));
  }
  std::vector<csys::Report> reports;
  reports.reserve(futures.size());
  for (std::future<csys::Report>& future : futures) {
    reports.push_back(future.get());
  }

  if (args.format == "structured") {
    std::cout << csys::render_structured(reports);
  } else {
    for (const csys::Report& report : reports) {
      std::cout << csys::render_text(report);
    }
  }

  int exit_code = 0;
  for (const csys::Report& report : reports) {
    if (report.verdict == csys::Verdict::kError) return 2;
    if (report.verdict == csys::Verdict::kFail) exit_code = 1;
  }
  return exit_code;
}

struct MemberArgs {
  std::string grammar_path;
  std::vector<std::string> rule_args;
  std::vector<std::string> inputs;
  std::size_t max_attrs = 30;
};

int run_member(const MemberArgs& args) {
  try {
    std::optional<std::string> grammar_source = read_file(args.grammar_path);
    if (!grammar_source) {
      std::cerr << "csys: cannot read grammar file '" << args.grammar_path
                << "'\n";
      return 2;
    }
    csys::RuleConfig config;
    config.max_attributes = args.max_attrs;
    std::vector<csys::ControllingAutomaton> controls;
    for (const std::string& arg : args.rule_args) {
      controls.push_back(resolve_rule(arg, config));
    }
    csys::CSystem system(csys::compile_grammar(*grammar_source),
                         std::move(controls));
    std::cout << "family: " << csys::classify(system) << "\n";

    bool all_members = true;
    for (const std::string& input : args.inputs) {
      csys::MembershipResult result = csys::membership(system, input);
      std::cout << "\"" << input << "\": "
                << (result.member() ? "accepted" : "rejected") << "\n";
      all_members = all_members && result.member();
    }
    return all_members ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "csys: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "csys — language-theoretic consistency checking of UML/XMI models"};
  app.require_subcommand(1);

  CheckArgs check_args;
  CLI::App* check =
      app.add_subcommand("check", "Check XMI documents against rules");
  check->add_option("files", check_args.files, "XMI documents to check")
      ->required();
  check
      ->add_option("--rule", check_args.rule_args,
                   "Built-in rule id or rule file (repeatable; default: "
                   "all built-ins)")
      ->expected(1)
      ->allow_extra_args(false);
  check
      ->add_option("--max-attrs", check_args.max_attrs,
                   "Attribute bound for R2-max-attributes (default 30)")
      ->check(CLI::PositiveNumber);
  check
      ->add_option("--format", check_args.format,
                   "Output format: text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  check->add_flag("--trace", check_args.trace,
                  "Include the checked event sequence in the output");
  check->add_flag("--no-normalize", check_args.no_normalize,
                  "Skip element-order normalization before checking");

  MemberArgs member_args;
  CLI::App* member = app.add_subcommand(
      "member", "Decide membership of raw strings in a controlled grammar");
  member
      ->add_option("--grammar", member_args.grammar_path,
                   "Grammar file of the controlled language")
      ->required();
  member
      ->add_option("--rule", member_args.rule_args,
                   "Controlling rule id or rule file (repeatable)")
      ->required()
      ->expected(1)
      ->allow_extra_args(false);
  member->add_option("inputs", member_args.inputs,
                     "Strings to test (one character per token)");
  member->add_option("--max-attrs", member_args.max_attrs,
                     "Attribute bound for R2-max-attributes (default 30)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (check->parsed()) return run_check(check_args);
  return run_member(member_args);
}
