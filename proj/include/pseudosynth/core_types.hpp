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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pseudosynth {

/// Thrown for malformed inputs that violate a structural invariant
/// (bad indents, out-of-range ranks, inconsistent line counts). These are
/// programming or data errors, never search events.
class StructuralError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PseudocodeLine {
  std::size_t index = 0;  // 1-based
  std::string text;       // empty for fixed structural lines
  int indent = 0;

  bool is_fixed() const { return text.empty(); }
};

struct Candidate {
  std::string code;
  double log_prob = 0.0;  // natural log, <= 0
  std::size_t rank = 1;   // 1-based
};

struct CandidateList {
  std::size_t line_index = 0;
  std::vector<Candidate> candidates;

  std::size_t size() const { return candidates.size(); }
  const Candidate& at_rank(std::size_t rank) const;
};

enum class Visibility { Public, Hidden };

struct TestCase {
  std::string input;
  std::string expected_output;
  Visibility visibility = Visibility::Public;
};

struct ProblemInstance {
  std::string id;
  std::vector<PseudocodeLine> lines;
  std::vector<CandidateList> candidate_lists;
  std::vector<TestCase> tests;
  std::size_t budget = 100;

  std::size_t num_lines() const { return lines.size(); }
  std::vector<TestCase> public_tests() const;
  std::vector<TestCase> hidden_tests() const;
  /// Copy of this instance with hidden tests removed. Search only ever
  /// sees instances built this way.
  ProblemInstance without_hidden_tests() const;
};

/// Checks every ProblemInstance invariant; throws StructuralError.
void validate(const ProblemInstance& instance);
/// Line-level checks only (contiguous indices, indent steps).
void validate_lines(std::span<const PseudocodeLine> lines);
/// Sorts by non-increasing log_prob (stable) and reassigns ranks 1..n.
/// Returns true if the input order had to change.
bool sort_and_rerank(CandidateList& list);

/// One candidate rank per line. Equality and hashing use the full vector.
class Selection {
public:
  Selection() = default;
  explicit Selection(std::vector<std::size_t> ranks) : ranks_(std::move(ranks)) {}

  static Selection top_one(std::size_t num_lines) {
    return Selection(std::vector<std::size_t>(num_lines, 1));
  }

  std::size_t size() const { return ranks_.size(); }
  /// 1-based line index.
  std::size_t rank(std::size_t line) const { return ranks_.at(line - 1); }
  const std::vector<std::size_t>& ranks() const { return ranks_; }
  std::span<const std::size_t> prefix(std::size_t len) const {
    return std::span<const std::size_t>(ranks_).first(len);
  }

  Selection incremented(std::size_t line) const {
    Selection next = *this;
    ++next.ranks_.at(line - 1);
    return next;
  }

  friend bool operator==(const Selection&, const Selection&) = default;
  friend auto operator<=>(const Selection&, const Selection&) = default;

private:
  std::vector<std::size_t> ranks_;
};

struct SelectionHash {
  std::size_t operator()(const Selection& s) const noexcept;
};

/// Throws StructuralError when `selection` does not index into `lists`.
void check_selection(const Selection& selection,
                     std::span<const CandidateList> lists);

/// Selected code text per line.
std::vector<std::string> selected_code(const Selection& selection,
                                       std::span<const CandidateList> lists);

/// Sum of the selected candidates' log-probabilities.
double selection_log_prob(const Selection& selection,
                          std::span<const CandidateList> lists);

/// Per-run count of how many times each (line, rank) candidate has been
/// down-weighted. Mutable and confined to one search run.
class DownWeightTable {
public:
  void apply(std::size_t line, std::size_t rank) { ++counts_[{line, rank}]; }
  std::size_t count(std::size_t line, std::size_t rank) const;
  bool empty() const { return counts_.empty(); }
  /// Number of down-weight applications over the candidates `selection` uses.
  std::size_t total_for(const Selection& selection) const;

private:
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts_;
};

/// selection_log_prob plus n * log(alpha) for every used candidate that has
/// been down-weighted n times.
double effective_log_prob(const Selection& selection,
                          std::span<const CandidateList> lists,
                          const DownWeightTable& weights, double alpha);

// ---------------------------------------------------------------------------
// Trial outcomes

struct CompileErrorOutcome {
  std::optional<std::size_t> reported_logical_line;  // nullopt = unmapped
  std::string message;
};
struct RuntimeErrorOutcome {
  std::size_t test_index = 0;
  int exit_status = 0;
};
struct WrongOutputOutcome {
  std::size_t first_failing_test = 0;  // 0-based, as are the test indices below
};
struct TimeoutOutcome {
  std::size_t test_index = 0;
};
struct AcceptedOutcome {};

using TrialOutcome = std::variant<CompileErrorOutcome, RuntimeErrorOutcome,
                                  WrongOutputOutcome, TimeoutOutcome,
                                  AcceptedOutcome>;

inline bool is_accepted(const TrialOutcome& o) {
  return std::holds_alternative<AcceptedOutcome>(o);
}
inline bool is_compile_error(const TrialOutcome& o) {
  return std::holds_alternative<CompileErrorOutcome>(o);
}
std::string outcome_name(const TrialOutcome& o);

}  // namespace pseudosynth
