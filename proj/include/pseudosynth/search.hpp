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
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "pseudosynth/assembler.hpp"
#include "pseudosynth/core_types.hpp"
#include "pseudosynth/judge.hpp"
#include "pseudosynth/localization.hpp"

namespace pseudosynth {

using SelectionSet = std::unordered_set<Selection, SelectionHash>;

/// Max-heap of selections keyed by effective log-probability. Equal
/// priorities pop the lexicographically smaller rank vector first. A
/// selection is never enqueued twice.
class Frontier {
public:
  struct Entry {
    double priority = 0.0;
    Selection selection;
  };

  /// Returns false (and does nothing) if the selection is already enqueued.
  bool push(Selection selection, double priority);
  std::optional<Entry> pop();
  bool contains(const Selection& selection) const { return members_.contains(selection); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const std::vector<Entry>& entries() const { return heap_; }

  /// Re-prioritizes every entry; entries mapped to nullopt are removed.
  void rebuild(const std::function<std::optional<double>(const Selection&)>& reprioritize);

  /// Heap order: true when `a` should pop after `b`.
  static bool pops_after(const Entry& a, const Entry& b);

private:
  std::vector<Entry> heap_;
  SelectionSet members_;
};

/// Trie over rank-vector prefixes. Inserting a prefix removes every stored
/// extension of it; inserting an extension of a stored prefix is a no-op.
class PrefixBlacklist {
public:
  PrefixBlacklist();
  /// Returns false when the prefix was already covered.
  bool insert(std::span<const std::size_t> prefix);
  /// Length of the stored prefix that `selection` extends, if any.
  std::optional<std::size_t> match(const Selection& selection) const;
  bool blocks(const Selection& selection) const { return match(selection).has_value(); }
  std::size_t size() const { return stored_; }
  std::vector<std::vector<std::size_t>> prefixes() const;

private:
  struct Node {
    bool terminal = false;
    std::map<std::size_t, std::size_t> children;  // rank -> node index
  };
  std::size_t count_terminals(std::size_t node) const;
  void collect(std::size_t node, std::vector<std::size_t>& path,
               std::vector<std::vector<std::size_t>>& out) const;

  std::vector<Node> nodes_;
  std::size_t stored_ = 0;
};

struct SearchConfig {
  double alpha = 0.1;
  std::size_t budget = 100;
  /// Candidates beyond this rank are never used.
  std::size_t beam = 100;
  std::string preamble = std::string(kDefaultPreamble);
};

/// Shared state consulted when generating successors.
struct SearchSpace {
  std::span<const CandidateList> lists;
  const DownWeightTable& weights;
  double alpha = 0.1;
  std::size_t beam = std::numeric_limits<std::size_t>::max();

  double priority(const Selection& s) const {
    return effective_log_prob(s, lists, weights, alpha);
  }
  std::size_t max_rank(std::size_t line) const {
    return std::min(lists[line - 1].size(), beam);
  }
};

/// Pushes every single-increment successor of `selection` that is not
/// explored, not enqueued, and not blacklisted. A blacklisted successor is
/// recorded in `pruned` and expanded in turn (only along its blacklisted
/// prefix) so that selections reachable only through it are still found.
void push_successors(Frontier& frontier, const SelectionSet& explored, SelectionSet& pruned,
                     const PrefixBlacklist& blacklist, const Selection& selection,
                     const SearchSpace& space);

/// Re-prioritizes the frontier under the current down-weights, dropping
/// explored and blacklisted entries. Dropped blacklisted entries are expanded
/// as in push_successors.
void rebuild_heap(Frontier& frontier, const SelectionSet& explored, SelectionSet& pruned,
                  const PrefixBlacklist& blacklist, const SearchSpace& space);

enum class TrialKind { Full, Probe };

struct TrialRecord {
  std::size_t trial = 0;  // 1-based budget index
  TrialKind kind = TrialKind::Full;
  Selection selection;
  std::size_t prefix_len = 0;
  double priority = 0.0;  // effective log-prob when popped (full trials)
  std::string outcome;    // outcome_name(), or "compile_ok"/"compile_error" for probes
  std::optional<std::size_t> reported_line;
  std::string message;
  std::string verdict;  // full trials only
  std::size_t budget_remaining = 0;
};

struct SearchTrace {
  std::vector<TrialRecord> records;

  /// Selections judged as full programs, in order.
  std::vector<Selection> judged() const;
  std::vector<double> popped_priorities() const;
};

enum class SearchStatus { Accepted, BudgetExhausted, SpaceExhausted, InfrastructureFailure };

std::string to_string(SearchStatus status);

struct SearchResult {
  SearchStatus status = SearchStatus::BudgetExhausted;
  /// Accepted program, or the fallback final program otherwise.
  std::optional<AssembledSource> program;
  std::optional<Selection> program_selection;
  std::size_t trials_used = 0;
  std::optional<std::size_t> accepting_trial;
  std::size_t blacklist_size = 0;
  std::string error;
  SearchTrace trace;
};

/// Budget-limited best-first search. Each compile (full program or prefix
/// probe) costs one trial. `localizer` may be null for plain best-first
/// search. Hidden tests in `instance` are ignored.
SearchResult best_first_search(const ProblemInstance& instance, Judge& judge,
                               Localizer* localizer, const SearchConfig& config);

}  // namespace pseudosynth
