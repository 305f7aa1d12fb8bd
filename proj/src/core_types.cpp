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

#include "pseudosynth/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pseudosynth {

const Candidate& CandidateList::at_rank(std::size_t rank) const {
  if (rank < 1 || rank > candidates.size()) {
    throw StructuralError("rank " + std::to_string(rank) +
                          " out of range for line " +
                          std::to_string(line_index));
  }
  return candidates[rank - 1];
}

std::vector<TestCase> ProblemInstance::public_tests() const {
  std::vector<TestCase> out;
  for (const auto& t : tests)
    if (t.visibility == Visibility::Public) out.push_back(t);
  return out;
}

std::vector<TestCase> ProblemInstance::hidden_tests() const {
  std::vector<TestCase> out;
  for (const auto& t : tests)
    if (t.visibility == Visibility::Hidden) out.push_back(t);
  return out;
}

ProblemInstance ProblemInstance::without_hidden_tests() const {
  ProblemInstance copy;
  copy.id = id;
  copy.lines = lines;
  copy.candidate_lists = candidate_lists;
  copy.tests = public_tests();
  copy.budget = budget;
  return copy;
}

void validate_lines(std::span<const PseudocodeLine> lines) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.index != i + 1)
      throw StructuralError("line indices must be contiguous from 1; got " +
                            std::to_string(line.index) + " at position " +
                            std::to_string(i + 1));
    if (line.indent < 0)
      throw StructuralError("negative indent on line " +
                            std::to_string(line.index));
    if (i == 0 && line.indent != 0)
      throw StructuralError("first line must have indent 0");
    if (i > 0 && line.indent > lines[i - 1].indent + 1)
      throw StructuralError("indent increases by more than one at line " +
                            std::to_string(line.index));
  }
}

void validate(const ProblemInstance& instance) {
  validate_lines(instance.lines);
  if (instance.lines.size() != instance.candidate_lists.size())
    throw StructuralError("problem " + instance.id + ": " +
                          std::to_string(instance.lines.size()) +
                          " lines but " +
                          std::to_string(instance.candidate_lists.size()) +
                          " candidate lists");
  if (instance.budget < 1)
    throw StructuralError("problem " + instance.id + ": budget must be >= 1");
  for (std::size_t i = 0; i < instance.candidate_lists.size(); ++i) {
    const auto& list = instance.candidate_lists[i];
    const auto where = "problem " + instance.id + " line " + std::to_string(i + 1);
    if (list.line_index != i + 1)
      throw StructuralError(where + ": candidate list has line index " +
                            std::to_string(list.line_index));
    if (list.candidates.empty())
      throw StructuralError(where + ": empty candidate list");
    for (std::size_t r = 0; r < list.candidates.size(); ++r) {
      const auto& c = list.candidates[r];
      if (!std::isfinite(c.log_prob) || c.log_prob > 0.0)
        throw StructuralError(where + ": log_prob must be finite and <= 0");
      if (c.rank != r + 1)
        throw StructuralError(where + ": ranks must be 1..n in order");
      if (r > 0 && c.log_prob > list.candidates[r - 1].log_prob)
        throw StructuralError(where + ": candidates not sorted by log_prob");
    }
    if (instance.lines[i].is_fixed() &&
        (list.candidates.size() != 1 || list.candidates[0].log_prob != 0.0))
      throw StructuralError(where +
                            ": fixed line needs exactly one candidate with "
                            "log_prob 0");
  }
  const bool has_public =
      std::any_of(instance.tests.begin(), instance.tests.end(),
                  [](const TestCase& t) { return t.visibility == Visibility::Public; });
  if (!has_public)
    throw StructuralError("problem " + instance.id + ": no public test");
}

bool sort_and_rerank(CandidateList& list) {
  auto before = list.candidates;
  std::stable_sort(list.candidates.begin(), list.candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.log_prob > b.log_prob;
                   });
  bool changed = false;
  for (std::size_t r = 0; r < list.candidates.size(); ++r) {
    if (list.candidates[r].code != before[r].code ||
        list.candidates[r].rank != r + 1)
      changed = true;
    list.candidates[r].rank = r + 1;
  }
  return changed;
}

std::size_t SelectionHash::operator()(const Selection& s) const noexcept {
  // FNV-1a over the rank vector.
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t r : s.ranks()) {
    h ^= static_cast<std::uint64_t>(r);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

void check_selection(const Selection& selection,
                     std::span<const CandidateList> lists) {
  if (selection.size() != lists.size())
    throw StructuralError("selection has " + std::to_string(selection.size()) +
                          " ranks for " + std::to_string(lists.size()) +
                          " lines");
  for (std::size_t i = 0; i < lists.size(); ++i) {
    const auto r = selection.ranks()[i];
    if (r < 1 || r > lists[i].size())
      throw StructuralError("rank " + std::to_string(r) + " invalid on line " +
                            std::to_string(i + 1));
  }
}

std::vector<std::string> selected_code(const Selection& selection,
                                       std::span<const CandidateList> lists) {
  check_selection(selection, lists);
  std::vector<std::string> out;
  out.reserve(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i)
    out.push_back(lists[i].candidates[selection.ranks()[i] - 1].code);
  return out;
}

double selection_log_prob(const Selection& selection,
                          std::span<const CandidateList> lists) {
  check_selection(selection, lists);
  double sum = 0.0;
  for (std::size_t i = 0; i < lists.size(); ++i)
    sum += lists[i].candidates[selection.ranks()[i] - 1].log_prob;
  return sum;
}

std::size_t DownWeightTable::count(std::size_t line, std::size_t rank) const {
  auto it = counts_.find({line, rank});
  return it == counts_.end() ? 0 : it->second;
}

std::size_t DownWeightTable::total_for(const Selection& selection) const {
  if (counts_.empty()) return 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < selection.size(); ++i)
    total += count(i + 1, selection.ranks()[i]);
  return total;
}

double effective_log_prob(const Selection& selection,
                          std::span<const CandidateList> lists,
                          const DownWeightTable& weights, double alpha) {
  const double base = selection_log_prob(selection, lists);
  const std::size_t n = weights.total_for(selection);
  if (n == 0) return base;
  return base + static_cast<double>(n) * std::log(alpha);
}

std::string outcome_name(const TrialOutcome& o) {
  struct Namer {
    std::string operator()(const CompileErrorOutcome&) const { return "compile_error"; }
    std::string operator()(const RuntimeErrorOutcome&) const { return "runtime_error"; }
    std::string operator()(const WrongOutputOutcome&) const { return "wrong_output"; }
    std::string operator()(const TimeoutOutcome&) const { return "timeout"; }
    std::string operator()(const AcceptedOutcome&) const { return "accepted"; }
  };
  return std::visit(Namer{}, o);
}

}  // namespace pseudosynth
