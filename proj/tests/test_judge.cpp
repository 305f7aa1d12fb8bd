// Copyright 2026 The Pseudosynth Authors. All rights reserved.
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


#include <string>
#include <vector>

#include "doctest.h"
#include "pseudosynth/judge.hpp"
#include "pseudosynth/real_judge.hpp"

using namespace pseudosynth;

namespace {

PseudocodeLine pl(std::size_t i, int indent) { return {i, "line", indent}; }

Program program_of(const std::vector<std::string>& code, const std::vector<int>& indents) {
  std::vector<PseudocodeLine> lines;
  for (std::size_t i = 0; i < code.size(); ++i) lines.push_back(pl(i + 1, indents[i]));
  return {assemble_code(lines, code, kDefaultPreamble), std::nullopt, code.size()};
}

const std::vector<int> kIndents = {0, 1, 1, 1};

}  // namespace

TEST_CASE("first error record") {
  const std::string text =
      "prog.cpp: In function 'int main()':\n"
      "prog.cpp:3:5: warning: unused variable 'x' [-Wunused-variable]\n"
      "prog.cpp:5:3: note: something\n"
      "prog.cpp:7:12: error: 'y' was not declared in this scope\n"
      "prog.cpp:9:1: error: expected '}' at end of input\n";
  auto d = parse_first_error(text);
  REQUIRE(d);
  CHECK(d->file == "prog.cpp");
  CHECK(d->line == 7);
  CHECK(d->column == 12);
  CHECK(d->message == "'y' was not declared in this scope");

  auto fatal = parse_first_error("a.cpp:2:10: fatal error: nope.h: No such file or directory\n");
  REQUIRE(fatal);
  CHECK(fatal->line == 2);

  CHECK_FALSE(parse_first_error("/usr/bin/ld: undefined reference to `foo'\n"));
  CHECK_FALSE(parse_first_error(""));
}

TEST_CASE("output normalization") {
  CHECK(normalize_output("a \r\nb\t\n\n\n") == "a\nb");
  CHECK(normalize_output("x") == "x");
  CHECK(normalize_output("") == "");
  CHECK(normalize_output("  lead\n") == "  lead");
}

TEST_CASE("compile failure maps back to a logical line") {
  auto p = program_of({"int main() {", "int x = 1;", "y = x;", "return 0;"}, kIndents);
  const std::size_t physical = *p.source.first_physical_line(3);
  CompileFailure f{physical, 1, "'y' was not declared in this scope", ""};
  auto o = to_outcome(f, p.source);
  CHECK(o.reported_logical_line == std::optional<std::size_t>(3));
  CompileFailure link{std::nullopt, std::nullopt, "undefined reference", ""};
  CHECK_FALSE(to_outcome(link, p.source).reported_logical_line);
  CompileFailure pre{1, 1, "preamble", ""};
  CHECK_FALSE(to_outcome(pre, p.source).reported_logical_line);
}

TEST_CASE("public tests stop at the first failure") {
  class Scripted : public Judge {
  public:
    std::vector<RunResult> results;
    std::size_t calls = 0;
    CompileResult compile(const Program&) override { return CompileSuccess{}; }
    RunResult run(const Artifact&, const TestCase&) override { return results.at(calls++); }
  } judge;
  Artifact a;
  std::vector<TestCase> tests(3);
  judge.results = {RunPassed{}, RunWrongOutput{"x"}, RunPassed{}};
  auto o = run_public_tests(judge, a, tests);
  REQUIRE(std::holds_alternative<WrongOutputOutcome>(o));
  CHECK(std::get<WrongOutputOutcome>(o).first_failing_test == 1);  // 0-based
  CHECK(judge.calls == 2);

  judge.calls = 0;
  judge.results = {RunPassed{}, RunPassed{}, RunTimeout{}};
  CHECK(std::holds_alternative<TimeoutOutcome>(run_public_tests(judge, a, tests)));
  judge.calls = 0;
  judge.results = {RunRuntimeError{139}};
  CHECK(std::holds_alternative<RuntimeErrorOutcome>(run_public_tests(judge, a, tests)));
  judge.calls = 0;
  judge.results = {RunPassed{}, RunPassed{}, RunPassed{}};
  CHECK(is_accepted(run_public_tests(judge, a, tests)));
}

TEST_CASE("real judge") {
  RealJudgeConfig cfg = RealJudgeConfig::from_environment();
  if (!compiler_available(cfg)) {
    MESSAGE("no compiler; skipped");
    return;
  }
  cfg.test_timeout = std::chrono::milliseconds(500);
  RealJudge judge(cfg);

  SUBCASE("compiles and runs") {
    auto p = program_of({"int main() {", "int n; cin >> n;", "cout << n + 1 << endl;", "return 0;"},
                        kIndents);
    auto r = judge.compile(p);
    REQUIRE(compiled(r));
    const Artifact& a = *std::get<CompileSuccess>(r).artifact;
    CHECK(std::holds_alternative<RunPassed>(judge.run(a, {"41\n", "42\n", Visibility::Public})));
    CHECK(std::holds_alternative<RunPassed>(judge.run(a, {"1", "2  \r\n\n", Visibility::Public})));
    auto wrong = judge.run(a, {"1", "3", Visibility::Public});
    REQUIRE(std::holds_alternative<RunWrongOutput>(wrong));
    CHECK(std::get<RunWrongOutput>(wrong).actual == "2\n");
  }
  SUBCASE("compile error line") {
    auto p = program_of({"int main() {", "int x = 1;", "y = x;", "return 0;"}, kIndents);
    auto r = judge.compile(p);
    REQUIRE(std::holds_alternative<CompileFailure>(r));
    auto o = to_outcome(std::get<CompileFailure>(r), p.source);
    CHECK(o.reported_logical_line == std::optional<std::size_t>(3));
    CHECK(o.message.find("not declared") != std::string::npos);
  }
  SUBCASE("runtime error and timeout") {
    auto crash = program_of({"int main() {", "int* p = nullptr;", "return *p + 3;", "return 0;"},
                            kIndents);
    auto rc = judge.compile(crash);
    REQUIRE(compiled(rc));
    CHECK(std::holds_alternative<RunRuntimeError>(
        judge.run(*std::get<CompileSuccess>(rc).artifact, {"", "", Visibility::Public})));

    auto spin = program_of({"int main() {", "volatile int k = 0;", "while (true) ++k;", "return 0;"},
                           kIndents);
    auto rs = judge.compile(spin);
    REQUIRE(compiled(rs));
    CHECK(std::holds_alternative<RunTimeout>(
        judge.run(*std::get<CompileSuccess>(rs).artifact, {"", "", Visibility::Public})));
  }
  SUBCASE("compile cache") {
    RealJudgeConfig c = cfg;
    c.compile_cache = true;
    RealJudge cached(c);
    auto p = program_of({"int main() {", "int x = 1;", "y = x;", "return 0;"}, kIndents);
    cached.compile(p);
    cached.compile(p);
    CHECK(cached.cache_hits() == 1);
    judge.compile(p);
    judge.compile(p);
    CHECK(judge.cache_hits() == 0);
  }
  SUBCASE("missing compiler") {
    RealJudgeConfig c = cfg;
    c.compiler = "/nonexistent/cxx";
    CHECK_FALSE(compiler_available(c));
    RealJudge broken(c);
    auto p = program_of({"int main() {", "int x = 1;", "x++;", "return 0;"}, kIndents);
    CHECK_THROWS_AS(broken.compile(p), JudgeInfrastructureError);
  }
}
