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


#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pseudosynth/dataset.hpp"
#include "pseudosynth/process.hpp"

using namespace pseudosynth;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = PSEUDOSYNTH_FIXTURES_DIR;

ProblemFiles selsort(const std::string& candidates = "candidates.jsonl") {
  return {kFixtures / "selsort" / "pseudocode.tsv", kFixtures / "selsort" / candidates,
          kFixtures / "selsort" / "tests"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

const std::string kTsv = std::string(kPseudocodeHeader) +
                         "\n"
                         "in function main\tint main() {\t7\tp\t1\t0\t0\n"
                         "print 1\tcout << 1 << endl;\t7\tp\t1\t1\t1\n"
                         "\t}\t7\tp\t1\t2\t0\n";

const std::string kHeader = R"({"format": "pseudosynth-candidates", "version": 1})" "\n";

ProblemFiles tiny(const ScratchDir& dir, const std::string& candidates, bool with_tests = true) {
  spit(dir.path() / "p.tsv", kTsv);
  spit(dir.path() / "c.jsonl", candidates);
  if (with_tests)
    spit(dir.path() / "tests" / "p" / "p_testcases_public.txt",
         "\n###ENDINPUT###\n1\n###ENDOUTPUT###\n");
  return {dir.path() / "p.tsv", dir.path() / "c.jsonl", dir.path() / "tests"};
}

}  // namespace

TEST_CASE("loading the worked example") {
  LoadReport rep;
  auto probs = load_problem_set(selsort(), {}, &rep);
  REQUIRE(probs.size() == 1);
  const auto& p = probs[0];
  CHECK(p.instance.id == "selsort-1");
  CHECK(p.instance.num_lines() == 13);
  CHECK(p.instance.lines.back().is_fixed());
  CHECK(p.instance.candidate_lists.back().size() == 1);
  CHECK(p.gold_code[0] == "int main() {");
  CHECK(p.instance.public_tests().size() >= 1);
  CHECK(p.instance.hidden_tests().size() >= 1);
  CHECK(rep.rejected.empty());
  CHECK(rep.warnings.empty());
  CHECK_NOTHROW(validate(p.instance));
}

TEST_CASE("beam and dedup") {
  LoadOptions o;
  o.beam = 1;
  auto probs = load_problem_set(selsort(), o);
  REQUIRE(probs.size() == 1);
  for (const auto& l : probs[0].instance.candidate_lists) CHECK(l.size() == 1);
  CHECK_THROWS_AS(load_problem_set(selsort(), LoadOptions{.beam = 0}), DatasetError);
}

TEST_CASE("unsorted candidates are re-ranked with a warning") {
  ScratchDir dir("ds");
  auto files = tiny(dir, kHeader +
                             R"({"problem":"p-1","line":1,"rank":1,"code":"int main() {","log_prob":-0.5})"
                             "\n"
                             R"({"problem":"p-1","line":1,"rank":2,"code":"int main(){","log_prob":-0.1})"
                             "\n"
                             R"({"problem":"p-1","line":2,"rank":1,"code":"cout << 1 << endl;","log_prob":-0.1})"
                             "\n");
  LoadReport rep;
  auto probs = load_problem_set(files, {}, &rep);
  REQUIRE(probs.size() == 1);
  CHECK(rep.warnings.size() == 1);
  CHECK(probs[0].instance.candidate_lists[0].at_rank(1).code == "int main(){");
  CHECK(probs[0].instance.candidate_lists[0].at_rank(2).rank == 2);
}

TEST_CASE("schema violations are errors") {
  ScratchDir dir("ds");
  SUBCASE("duplicate key") {
    auto files = tiny(dir, kHeader +
                               R"({"problem":"p-1","line":1,"rank":1,"code":"a","log_prob":-0.5})"
                               "\n"
                               R"({"problem":"p-1","line":1,"rank":1,"code":"b","log_prob":-0.6})"
                               "\n");
    CHECK_THROWS_WITH_AS(load_problem_set(files, {}), doctest::Contains("c.jsonl:3"), DatasetError);
  }
  SUBCASE("positive log-prob") {
    auto files = tiny(dir, kHeader + R"({"problem":"p-1","line":1,"rank":1,"code":"a","log_prob":0.5})"
                                     "\n");
    CHECK_THROWS_AS(load_problem_set(files, {}), DatasetError);
  }
  SUBCASE("missing header") {
    auto files = tiny(dir, R"({"problem":"p-1","line":1,"rank":1,"code":"a","log_prob":-0.5})" "\n");
    CHECK_THROWS_AS(load_problem_set(files, {}), DatasetError);
  }
  SUBCASE("zero-based line") {
    auto files = tiny(dir, kHeader + R"({"problem":"p-1","line":0,"rank":1,"code":"a","log_prob":-0.5})"
                                     "\n");
    CHECK_THROWS_AS(load_problem_set(files, {}), DatasetError);
  }
  SUBCASE("short tsv row") {
    auto files = tiny(dir, kHeader);
    spit(files.pseudocode_tsv, std::string(kPseudocodeHeader) + "\nonly\ttwo\n");
    CHECK_THROWS_WITH_AS(load_problem_set(files, {}), doctest::Contains("p.tsv:2"), DatasetError);
  }
}

TEST_CASE("problems without candidates or tests are rejected") {
  ScratchDir dir("ds");
  const std::string only_line1 =
      kHeader + R"({"problem":"p-1","line":1,"rank":1,"code":"int main() {","log_prob":-0.1})" "\n";
  {
    auto files = tiny(dir, only_line1);
    LoadReport rep;
    CHECK(load_problem_set(files, {}, &rep).empty());
    REQUIRE(rep.rejected.size() == 1);
    CHECK(rep.rejected[0].find("line 2") != std::string::npos);
  }
  {
    auto files = tiny(dir, only_line1);
    LoadOptions o;
    o.gold_backfill = true;
    o.backfill_log_prob = -7.0;
    auto probs = load_problem_set(files, o);
    REQUIRE(probs.size() == 1);
    CHECK(probs[0].instance.candidate_lists[1].at_rank(1).code == "cout << 1 << endl;");
    CHECK(probs[0].instance.candidate_lists[1].at_rank(1).log_prob == -7.0);
  }
  {
    ScratchDir bare("ds");
    auto files = tiny(bare, only_line1, false);
    LoadOptions o;
    o.gold_backfill = true;
    LoadReport rep;
    CHECK(load_problem_set(files, o, &rep).empty());
    REQUIRE(rep.rejected.size() == 1);
    CHECK(rep.rejected[0].find("no public tests") != std::string::npos);
  }
}

TEST_CASE("gold-only loading without a candidate file") {
  auto files = selsort();
  files.candidates.clear();
  auto probs = load_problem_set(files, {});
  REQUIRE(probs.size() == 1);
  for (std::size_t i = 0; i < probs[0].gold_code.size(); ++i)
    CHECK(probs[0].instance.candidate_lists[i].at_rank(1).code == probs[0].gold_code[i]);
}

TEST_CASE("test-case files") {
  auto tests = parse_testcases("1 2\n###ENDINPUT###\n3\n###ENDOUTPUT###\n4\n5\n###ENDINPUT###\n9\n###ENDOUTPUT###\n",
                               Visibility::Hidden);
  REQUIRE(tests.size() == 2);
  CHECK(tests[0].input == "1 2\n");
  CHECK(tests[0].expected_output == "3\n");
  CHECK(tests[1].input == "4\n5\n");
  CHECK(tests[1].visibility == Visibility::Hidden);
  CHECK(parse_testcases(format_testcases(tests), Visibility::Hidden).size() == 2);
  CHECK(parse_testcases("", Visibility::Public).empty());
  CHECK_THROWS_AS(parse_testcases("x\n###ENDOUTPUT###\n", Visibility::Public), DatasetError);
  CHECK_THROWS_AS(parse_testcases("x\n###ENDINPUT###\ny\n", Visibility::Public), DatasetError);
}

TEST_CASE("canonical writers are idempotent") {
  for (const char* cand : {"candidates.jsonl", "candidates_rank2.jsonl"}) {
    CAPTURE(cand);
    auto probs = load_problem_set(selsort(cand), {});
    ScratchDir a("rt"), b("rt");
    ProblemFiles fa{a.path() / "p.tsv", a.path() / "c.jsonl", a.path() / "tests"};
    ProblemFiles fb{b.path() / "p.tsv", b.path() / "c.jsonl", b.path() / "tests"};
    write_problem_set(probs, fa);
    auto again = load_problem_set(fa, {});
    REQUIRE(again.size() == 1);
    CHECK(again[0].instance.candidate_lists.size() == probs[0].instance.candidate_lists.size());
    CHECK(again[0].gold_code == probs[0].gold_code);
    write_problem_set(again, fb);
    CHECK(slurp(fa.pseudocode_tsv) == slurp(fb.pseudocode_tsv));
    CHECK(slurp(fa.candidates) == slurp(fb.candidates));
    CHECK(slurp(fa.tests_dir / "selsort" / "selsort_testcases_public.txt") ==
          slurp(fb.tests_dir / "selsort" / "selsort_testcases_public.txt"));
    CHECK(slurp(fa.tests_dir / "selsort" / "selsort_testcases_hidden.txt") ==
          slurp(fb.tests_dir / "selsort" / "selsort_testcases_hidden.txt"));
  }
}
