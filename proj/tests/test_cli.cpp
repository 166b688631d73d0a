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
// End-to-end tests that spawn the csys binary (CSYS_TOOL_PATH) through the
// shell and assert on its exit codes and output.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "testing.hpp"

using csys::testing::fixture;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr, merged
};

RunResult run_tool(const std::string& arguments,
                   const std::string& env_prefix = "") {
  std::string command = env_prefix + "'" + CSYS_TOOL_PATH + "' " + arguments +
                        " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, n);
  }
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string quoted(const std::string& path) { return "'" + path + "'"; }

// Writes `text` under a unique name in the temp directory; removes it on
// destruction.
class TempFile {
 public:
  TempFile(const std::string& name, const std::string& text)
      : path_((std::filesystem::temp_directory_path() / name).string()) {
    std::ofstream out(path_, std::ios::binary);
    out << text;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Joins all lines except the volatile elapsed-time measurements.
std::string without_timings(const std::string& text) {
  std::istringstream in(text);
  std::string out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("elapsed_ms") != std::string::npos) continue;
    if (line.find(" ms") != std::string::npos) continue;
    out += line + "\n";
  }
  return out;
}

const char kClassFixture[] = "class-multiple-generalization.xmi";
const char kActivityFixture[] = "activity-unbalanced-fork-join.xmi";

// Join-first but balanced: fails as written, passes once normalized.
const char kReorderedActivity[] =
    "<packagedElement xmi:type=\"uml:Activity\" xmi:id=\"a1\">"
    "<node xmi:type=\"uml:JoinNode\" xmi:id=\"j1\">"
    "<incoming xmi:idref=\"http://m#e1\"/>"
    "</node>"
    "<node xmi:type=\"uml:ForkNode\" xmi:id=\"f1\">"
    "<outgoing xmi:idref=\"http://m#e1\"/>"
    "</node>"
    "</packagedElement>";

const char kTwoPropertyClass[] =
    "<uml:Package xmi:id=\"p1\">"
    "<packagedElement xmi:type=\"uml:Class\" xmi:id=\"c1\" name=\"A\">"
    "<ownedAttribute xmi:type=\"uml:Property\" xmi:id=\"a1\" name=\"x\"/>"
    "<ownedAttribute xmi:type=\"uml:Property\" xmi:id=\"a2\" name=\"y\"/>"
    "</packagedElement>"
    "</uml:Package>";

}  // namespace

TEST_CASE("check exits 0 when every rule passes") {
  RunResult run = run_tool("check --rule R2-max-attributes " +
                           quoted(fixture(kClassFixture)));
  CHECK(run.exit_code == 0);
  CHECK(run.output.find(": pass") != std::string::npos);
}

TEST_CASE("check exits 1 and names the failing rule") {
  RunResult run = run_tool("check " + quoted(fixture(kClassFixture)));
  CHECK(run.exit_code == 1);
  CHECK(run.output.find(": fail") != std::string::npos);
  CHECK(run.output.find("[R1-single-generalization]") != std::string::npos);
  CHECK(run.output.find("FaxMachine") != std::string::npos);

  RunResult activity = run_tool("check " + quoted(fixture(kActivityFixture)));
  CHECK(activity.exit_code == 1);
  CHECK(activity.output.find("[R3-fork-join-balance]") != std::string::npos);
}

TEST_CASE("check exits 2 on an unreadable file") {
  RunResult run = run_tool("check /nonexistent/model.xmi");
  CHECK(run.exit_code == 2);
  CHECK(run.output.find("error (cannot read file)") != std::string::npos);
}

TEST_CASE("an error verdict dominates a failing sibling") {
  RunResult run = run_tool("check " + quoted(fixture(kClassFixture)) +
                           " /nonexistent/model.xmi");
  CHECK(run.exit_code == 2);
  CHECK(run.output.find(": fail") != std::string::npos);
  CHECK(run.output.find(": error") != std::string::npos);
}

TEST_CASE("check without files is a usage error") {
  RunResult run = run_tool("check");
  CHECK(run.exit_code == 2);
  CHECK(run.output.find("required") != std::string::npos);
}

TEST_CASE("an unknown rule argument is a usage error") {
  RunResult run = run_tool("check --rule no-such-rule " +
                           quoted(fixture(kClassFixture)));
  CHECK(run.exit_code == 2);
  CHECK(run.output.find(
            "neither a built-in id nor a readable rule file") !=
        std::string::npos);
}

TEST_CASE("structured output is valid JSON with anchored violations") {
  RunResult run =
      run_tool("check --format structured --rule R1-single-generalization " +
               quoted(fixture(kClassFixture)));
  CHECK(run.exit_code == 1);
  nlohmann::json j = nlohmann::json::parse(run.output);
  REQUIRE(j.is_object());
  CHECK(j["verdict"] == "fail");
  REQUIRE(j["violations"].size() == 1);
  CHECK(j["violations"][0]["element_name"] == "FaxMachine");
  CHECK(j["violations"][0]["line"] == 24);
  CHECK(j["stats"]["rules"] == 1);
}

TEST_CASE("structured output for several files is an array in argv order") {
  RunResult run = run_tool("check --format structured " +
                           quoted(fixture(kClassFixture)) + " " +
                           quoted(fixture(kActivityFixture)));
  CHECK(run.exit_code == 1);
  nlohmann::json j = nlohmann::json::parse(run.output);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["file"] == fixture(kClassFixture));
  CHECK(j[1]["file"] == fixture(kActivityFixture));
  CHECK(j[0]["violations"][0]["rule_id"] == "R1-single-generalization");
  CHECK(j[1]["violations"][0]["rule_id"] == "R3-fork-join-balance");
}

TEST_CASE("structured output is deterministic run over run") {
  std::string arguments =
      "check --format structured " + quoted(fixture(kClassFixture));
  RunResult first = run_tool(arguments);
  RunResult second = run_tool(arguments);
  CHECK(first.exit_code == 1);
  CHECK(second.exit_code == 1);
  CHECK(without_timings(first.output) == without_timings(second.output));
}

TEST_CASE("a rule file path behaves exactly like its built-in id") {
  std::string by_id =
      run_tool("check --format structured --rule R1-single-generalization " +
               quoted(fixture(kClassFixture)))
          .output;
  std::string by_path =
      run_tool("check --format structured --rule " +
               quoted(std::string(CSYS_RULES_DIR) +
                      "/R1-single-generalization.rule") +
               " " + quoted(fixture(kClassFixture)))
          .output;
  CHECK(without_timings(by_id) == without_timings(by_path));
}

TEST_CASE("rule names resolve through CSYS_RULE_PATH") {
  std::string grammar = quoted(std::string(CSYS_GRAMMARS_DIR) +
                               "/demo-ab.grammar");
  // Without the search path the bare name is unknown.
  RunResult unresolved =
      run_tool("member --grammar " + grammar + " --rule demo-a-before-b aab");
  CHECK(unresolved.exit_code == 2);
  CHECK(unresolved.output.find("neither a built-in id") != std::string::npos);

  // With it the name is found via the .rule suffix fallback.
  RunResult resolved =
      run_tool("member --grammar " + grammar + " --rule demo-a-before-b aab",
               "CSYS_RULE_PATH='" CSYS_RULES_DIR "' ");
  CHECK(resolved.exit_code == 0);
  CHECK(resolved.output ==
        "family: C_R^R\n"
        "\"aab\": accepted\n");
}

TEST_CASE("member prints the family and a verdict per string") {
  RunResult run = run_tool(
      "member --grammar " +
      quoted(std::string(CSYS_GRAMMARS_DIR) + "/demo-ab.grammar") +
      " --rule " +
      quoted(std::string(CSYS_RULES_DIR) + "/demo-a-before-b.rule") +
      " aab b abab ''");
  CHECK(run.exit_code == 1);  // some strings are rejected
  CHECK(run.output ==
        "family: C_R^R\n"
        "\"aab\": accepted\n"
        "\"b\": accepted\n"
        "\"abab\": rejected\n"
        "\"\": rejected\n");
}

TEST_CASE("member exits 0 when every string is accepted") {
  RunResult run = run_tool(
      "member --grammar " +
      quoted(std::string(CSYS_GRAMMARS_DIR) + "/demo-ab.grammar") +
      " --rule " +
      quoted(std::string(CSYS_RULES_DIR) + "/demo-a-before-b.rule") +
      " aab ab b bbb");
  CHECK(run.exit_code == 0);
}

TEST_CASE("member classifies the XMI document system as context-free") {
  RunResult run = run_tool(
      "member --grammar " +
      quoted(std::string(CSYS_GRAMMARS_DIR) + "/uml-xmi.grammar") +
      " --rule R3-fork-join-balance");
  CHECK(run.exit_code == 0);
  CHECK(run.output == "family: C_CF^CF\n");
}

TEST_CASE("member exits 2 on an unreadable grammar") {
  RunResult run = run_tool(
      "member --grammar /nonexistent/g.grammar --rule R3-fork-join-balance");
  CHECK(run.exit_code == 2);
  CHECK(run.output.find("cannot read grammar file") != std::string::npos);
}

TEST_CASE("--max-attrs sets the bound of the attribute rule") {
  TempFile doc("csys-cli-two-properties.xmi", kTwoPropertyClass);
  RunResult tight = run_tool("check --rule R2-max-attributes --max-attrs 1 " +
                             quoted(doc.path()));
  CHECK(tight.exit_code == 1);
  CHECK(tight.output.find("at most 1 attribute.") != std::string::npos);

  RunResult loose = run_tool("check --rule R2-max-attributes --max-attrs 2 " +
                             quoted(doc.path()));
  CHECK(loose.exit_code == 0);
}

TEST_CASE("--no-normalize checks the document order as written") {
  TempFile doc("csys-cli-reordered-activity.xmi", kReorderedActivity);
  RunResult normalized = run_tool("check --rule R3-fork-join-balance " +
                                  quoted(doc.path()));
  CHECK(normalized.exit_code == 0);
  CHECK(normalized.output.find("warning: element order was normalized") !=
        std::string::npos);

  RunResult verbatim = run_tool(
      "check --no-normalize --rule R3-fork-join-balance " +
      quoted(doc.path()));
  CHECK(verbatim.exit_code == 1);
}

TEST_CASE("--trace appends the checked event sequence") {
  TempFile doc("csys-cli-tiny-package.xmi", "<uml:Package xmi:id=\"p1\"/>");
  RunResult run = run_tool("check --trace --rule R1-single-generalization " +
                           quoted(doc.path()));
  CHECK(run.exit_code == 0);
  CHECK(run.output.find("trace: 2a_1 2k(Package) 2d_4 2e 2f_1") !=
        std::string::npos);
}
