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


#include <cmath>
#include <unordered_set>

#include "doctest.h"
#include "pseudosynth/core_types.hpp"
#include "pseudosynth/mock_bench.hpp"

using namespace pseudosynth;

namespace {

ProblemInstance two_line_instance() {
  return make_mock_scenario("p", "", {{{-0.1, {}}, {-0.5, {}}}, {{-0.2, {}}, {-0.3, {}}, {-1.0, {}}}},
                            {1, 1}, 10, 0)
      .instance;
}

}  // namespace

TEST_CASE("selection basics") {
  Selection s = Selection::top_one(3);
  CHECK(s.ranks() == std::vector<std::size_t>{1, 1, 1});
  Selection t = s.incremented(2);
  CHECK(t.rank(2) == 2);
  CHECK(s.rank(2) == 1);
  CHECK(t.prefix(2).size() == 2);
  CHECK(s < t);
  CHECK(Selection({1, 2}) < Selection({2, 1}));
  CHECK_THROWS(s.rank(0));
  CHECK_THROWS(s.rank(4));
}

TEST_CASE("selection hash separates distinct vectors") {
  std::unordered_set<Selection, SelectionHash> set;
  for (std::size_t a = 1; a <= 6; ++a)
    for (std::size_t b = 1; b <= 6; ++b)
      for (std::size_t c = 1; c <= 6; ++c) set.insert(Selection({a, b, c}));
  CHECK(set.size() == 216);
  CHECK(SelectionHash{}(Selection({1, 2})) != SelectionHash{}(Selection({2, 1})));
}

TEST_CASE("selection log-prob and down-weighting") {
  auto inst = two_line_instance();
  Selection s({2, 3});
  CHECK(selection_log_prob(s, inst.candidate_lists) == doctest::Approx(-1.5));
  CHECK(selected_code(s, inst.candidate_lists) ==
        std::vector<std::string>{"stmt_1_2();", "stmt_2_3();"});

  DownWeightTable w;
  CHECK(w.empty());
  CHECK(effective_log_prob(s, inst.candidate_lists, w, 0.1) == doctest::Approx(-1.5));
  w.apply(1, 2);
  w.apply(1, 2);
  w.apply(2, 1);
  CHECK(w.count(1, 2) == 2);
  CHECK(w.count(2, 3) == 0);
  CHECK(w.total_for(s) == 2);
  CHECK(effective_log_prob(s, inst.candidate_lists, w, 0.1) ==
        doctest::Approx(-1.5 + 2 * std::log(0.1)));
  // only the exact (line, rank) is penalized
  CHECK(effective_log_prob(Selection({1, 3}), inst.candidate_lists, w, 0.1) ==
        doctest::Approx(-1.1));
}

TEST_CASE("check_selection rejects out-of-range ranks") {
  auto inst = two_line_instance();
  CHECK_NOTHROW(check_selection(Selection({2, 3}), inst.candidate_lists));
  CHECK_THROWS_AS(check_selection(Selection({3, 1}), inst.candidate_lists), StructuralError);
  CHECK_THROWS_AS(check_selection(Selection({0, 1}), inst.candidate_lists), StructuralError);
  CHECK_THROWS_AS(check_selection(Selection({1}), inst.candidate_lists), StructuralError);
}

TEST_CASE("validate catches structural problems") {
  auto inst = two_line_instance();
  CHECK_NOTHROW(validate(inst));

  SUBCASE("indent jump") {
    inst.lines[1].indent = 2;
    CHECK_THROWS_AS(validate(inst), StructuralError);
  }
  SUBCASE("first line indented") {
    inst.lines[0].indent = 1;
    CHECK_THROWS_AS(validate(inst), StructuralError);
  }
  SUBCASE("unsorted candidates") {
    inst.candidate_lists[1].candidates[0].log_prob = -2.0;
    CHECK_THROWS_AS(validate(inst), StructuralError);
  }
  SUBCASE("positive log prob") {
    inst.candidate_lists[0].candidates[0].log_prob = 0.5;
    CHECK_THROWS_AS(validate(inst), StructuralError);
  }
  SUBCASE("empty list") {
    inst.candidate_lists[0].candidates.clear();
    CHECK_THROWS_AS(validate(inst), StructuralError);
  }
  SUBCASE("no public tests") {
    inst.tests = {{"1", "1", Visibility::Hidden}};
    CHECK_THROWS_AS(validate(inst), StructuralError);
  }
  SUBCASE("zero budget") {
    inst.budget = 0;
    CHECK_THROWS_AS(validate(inst), StructuralError);
  }
  SUBCASE("fixed line with alternatives") {
    inst.lines[1].text.clear();
    CHECK_THROWS_AS(validate(inst), StructuralError);
  }
}

TEST_CASE("without_hidden_tests drops hidden cases only") {
  auto inst = two_line_instance();
  inst.tests = {{"a", "b", Visibility::Public}, {"c", "d", Visibility::Hidden}};
  auto pub = inst.without_hidden_tests();
  REQUIRE(pub.tests.size() == 1);
  CHECK(pub.tests[0].input == "a");
  CHECK(inst.hidden_tests().size() == 1);
}

TEST_CASE("sort_and_rerank reports reordering") {
  CandidateList list{1, {{"a", -0.5, 1}, {"b", -0.1, 2}, {"c", -0.5, 3}}};
  CHECK(sort_and_rerank(list));
  CHECK(list.candidates[0].code == "b");
  CHECK(list.candidates[1].code == "a");  // stable for ties
  CHECK(list.candidates[2].code == "c");
  CHECK(list.candidates[2].rank == 3);
  CHECK_FALSE(sort_and_rerank(list));
}

TEST_CASE("outcome names") {
  CHECK(outcome_name(AcceptedOutcome{}) == "accepted");
  CHECK(outcome_name(CompileErrorOutcome{}) == "compile_error");
  CHECK(outcome_name(WrongOutputOutcome{}) == "wrong_output");
  CHECK(outcome_name(TimeoutOutcome{}) == "timeout");
  CHECK(outcome_name(RuntimeErrorOutcome{}) == "runtime_error");
  CHECK(is_accepted(AcceptedOutcome{}));
  CHECK(is_compile_error(CompileErrorOutcome{}));
}
