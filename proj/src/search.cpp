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

#include "pseudosynth/search.hpp"

#include <algorithm>
#include <utility>

namespace pseudosynth {

// ---------------------------------------------------------------------------
// Frontier

bool Frontier::pops_after(const Entry& a, const Entry& b) {
  if (a.priority != b.priority) return a.priority < b.priority;
  return b.selection < a.selection;
}

bool Frontier::push(Selection selection, double priority) {
  if (!members_.insert(selection).second) return false;
  heap_.push_back({priority, std::move(selection)});
  std::push_heap(heap_.begin(), heap_.end(), pops_after);
  return true;
}

std::optional<Frontier::Entry> Frontier::pop() {
  if (heap_.empty()) return std::nullopt;
  std::pop_heap(heap_.begin(), heap_.end(), pops_after);
  Entry top = std::move(heap_.back());
  heap_.pop_back();
  members_.erase(top.selection);
  return top;
}

void Frontier::rebuild(
    const std::function<std::optional<double>(const Selection&)>& reprioritize) {
  std::vector<Entry> kept;
  kept.reserve(heap_.size());
  for (auto& e : heap_) {
    if (auto p = reprioritize(e.selection)) {
      kept.push_back({*p, std::move(e.selection)});
    } else {
      members_.erase(e.selection);
    }
  }
  heap_ = std::move(kept);
  std::make_heap(heap_.begin(), heap_.end(), pops_after);
}

// ---------------------------------------------------------------------------
// PrefixBlacklist

PrefixBlacklist::PrefixBlacklist() : nodes_(1) {}

std::size_t PrefixBlacklist::count_terminals(std::size_t node) const {
  std::size_t n = nodes_[node].terminal ? 1 : 0;
  for (const auto& [rank, child] : nodes_[node].children) n += count_terminals(child);
  return n;
}

bool PrefixBlacklist::insert(std::span<const std::size_t> prefix) {
  std::size_t node = 0;
  for (std::size_t rank : prefix) {
    if (nodes_[node].terminal) return false;
    auto it = nodes_[node].children.find(rank);
    if (it == nodes_[node].children.end()) {
      nodes_.emplace_back();
      const std::size_t fresh = nodes_.size() - 1;
      nodes_[node].children.emplace(rank, fresh);
      node = fresh;
    } else {
      node = it->second;
    }
  }
  if (nodes_[node].terminal) return false;
  stored_ -= count_terminals(node);
  nodes_[node].children.clear();
  nodes_[node].terminal = true;
  ++stored_;
  return true;
}

std::optional<std::size_t> PrefixBlacklist::match(const Selection& selection) const {
  std::size_t node = 0;
  std::size_t depth = 0;
  for (std::size_t rank : selection.ranks()) {
    if (nodes_[node].terminal) return depth;
    auto it = nodes_[node].children.find(rank);
    if (it == nodes_[node].children.end()) return std::nullopt;
    node = it->second;
    ++depth;
  }
  if (nodes_[node].terminal) return depth;
  return std::nullopt;
}

void PrefixBlacklist::collect(std::size_t node, std::vector<std::size_t>& path,
                              std::vector<std::vector<std::size_t>>& out) const {
  if (nodes_[node].terminal) {
    out.push_back(path);
    return;
  }
  for (const auto& [rank, child] : nodes_[node].children) {
    path.push_back(rank);
    collect(child, path, out);
    path.pop_back();
  }
}

std::vector<std::vector<std::size_t>> PrefixBlacklist::prefixes() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  collect(0, path, out);
  return out;
}

// ---------------------------------------------------------------------------
// Successors

namespace {

struct PrunedNode {
  Selection selection;
  std::size_t prefix_len;
};

// Offers `candidate` to the frontier, or queues it for expansion when it is
// blacklisted.
void offer(Frontier& frontier, const SelectionSet& explored, SelectionSet& pruned,
           const PrefixBlacklist& blacklist, Selection candidate, const SearchSpace& space,
           std::vector<PrunedNode>& work) {
  if (explored.contains(candidate) || frontier.contains(candidate) ||
      pruned.contains(candidate))
    return;
  if (auto len = blacklist.match(candidate)) {
    pruned.insert(candidate);
    work.push_back({std::move(candidate), *len});
    return;
  }
  const double p = space.priority(candidate);
  frontier.push(std::move(candidate), p);
}

// A blacklisted selection only escapes the blacklist by changing a line
// inside its blacklisted prefix, so expansion is restricted to those lines.
void expand_pruned(Frontier& frontier, const SelectionSet& explored, SelectionSet& pruned,
                   const PrefixBlacklist& blacklist, const SearchSpace& space,
                   std::vector<PrunedNode>& work) {
  while (!work.empty()) {
    PrunedNode node = std::move(work.back());
    work.pop_back();
    for (std::size_t line = 1; line <= node.prefix_len; ++line) {
      if (node.selection.rank(line) >= space.max_rank(line)) continue;
      offer(frontier, explored, pruned, blacklist, node.selection.incremented(line), space,
            work);
    }
  }
}

}  // namespace

void push_successors(Frontier& frontier, const SelectionSet& explored, SelectionSet& pruned,
                     const PrefixBlacklist& blacklist, const Selection& selection,
                     const SearchSpace& space) {
  std::vector<PrunedNode> work;
  for (std::size_t line = 1; line <= selection.size(); ++line) {
    if (selection.rank(line) >= space.max_rank(line)) continue;
    offer(frontier, explored, pruned, blacklist, selection.incremented(line), space, work);
  }
  expand_pruned(frontier, explored, pruned, blacklist, space, work);
}

void rebuild_heap(Frontier& frontier, const SelectionSet& explored, SelectionSet& pruned,
                  const PrefixBlacklist& blacklist, const SearchSpace& space) {
  std::vector<PrunedNode> work;
  frontier.rebuild([&](const Selection& s) -> std::optional<double> {
    if (explored.contains(s)) return std::nullopt;
    if (auto len = blacklist.match(s)) {
      if (pruned.insert(s).second) work.push_back({s, *len});
      return std::nullopt;
    }
    return space.priority(s);
  });
  expand_pruned(frontier, explored, pruned, blacklist, space, work);
}

// ---------------------------------------------------------------------------
// Trace

std::vector<Selection> SearchTrace::judged() const {
  std::vector<Selection> out;
  for (const auto& r : records)
    if (r.kind == TrialKind::Full) out.push_back(r.selection);
  return out;
}

std::vector<double> SearchTrace::popped_priorities() const {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.kind == TrialKind::Full) out.push_back(r.priority);
  return out;
}

std::string to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::Accepted: return "accepted";
    case SearchStatus::BudgetExhausted: return "budget_exhausted";
    case SearchStatus::SpaceExhausted: return "space_exhausted";
    case SearchStatus::InfrastructureFailure: return "infrastructure_failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Search

namespace {

class SearchRun {
public:
  SearchRun(const ProblemInstance& instance, Judge& judge, Localizer* localizer,
            const SearchConfig& config)
      : instance_(instance),
        judge_(judge),
        localizer_(localizer),
        config_(config),
        public_tests_(instance.public_tests()),
        space_{instance.candidate_lists, weights_, config.alpha, config.beam} {}

  SearchResult run();

private:
  void apply(const Verdict& verdict, const Selection& selection);
  void finish_with_fallback();

  const ProblemInstance& instance_;
  Judge& judge_;
  Localizer* localizer_;
  const SearchConfig& config_;
  std::vector<TestCase> public_tests_;

  DownWeightTable weights_;
  SearchSpace space_;
  Frontier frontier_;
  SelectionSet explored_;
  SelectionSet pruned_;
  PrefixBlacklist blacklist_;
  SearchResult result_;

  std::optional<Selection> best_compiling_;
  double best_compiling_log_prob_ = 0.0;
};

void SearchRun::apply(const Verdict& verdict, const Selection& selection) {
  if (const auto* dw = std::get_if<DownWeight>(&verdict)) {
    if (dw->line < 1 || dw->line > selection.size()) return;
    weights_.apply(dw->line, selection.rank(dw->line));
    rebuild_heap(frontier_, explored_, pruned_, blacklist_, space_);
  } else if (const auto* bl = std::get_if<BlacklistPrefix>(&verdict)) {
    if (bl->prefix_len < 1 || bl->prefix_len > selection.size()) return;
    if (blacklist_.insert(selection.prefix(bl->prefix_len)))
      rebuild_heap(frontier_, explored_, pruned_, blacklist_, space_);
  }
}

void SearchRun::finish_with_fallback() {
  const Selection chosen = best_compiling_.value_or(Selection::top_one(instance_.num_lines()));
  result_.program_selection = chosen;
  result_.program = assemble(instance_, chosen, config_.preamble);
}

SearchResult SearchRun::run() {
  validate(instance_);
  if (config_.budget < 1) throw StructuralError("budget must be >= 1");
  const std::size_t budget = config_.budget;
  const auto top = Selection::top_one(instance_.num_lines());
  frontier_.push(top, space_.priority(top));

  auto& trials = result_.trials_used;
  auto& records = result_.trace.records;

  while (true) {
    if (trials >= budget) {
      result_.status = SearchStatus::BudgetExhausted;
      break;
    }
    auto entry = frontier_.pop();
    if (!entry) {
      result_.status = SearchStatus::SpaceExhausted;
      break;
    }
    const Selection sel = std::move(entry->selection);
    if (explored_.contains(sel)) continue;
    if (blacklist_.blocks(sel)) {
      // Normally purged on insertion; kept for safety against stale entries.
      pruned_.insert(sel);
      push_successors(frontier_, explored_, pruned_, blacklist_, sel, space_);
      continue;
    }
    explored_.insert(sel);

    Program program{assemble(instance_, sel, config_.preamble), sel, instance_.num_lines()};
    ++trials;
    TrialRecord rec;
    rec.trial = trials;
    rec.kind = TrialKind::Full;
    rec.selection = sel;
    rec.prefix_len = instance_.num_lines();
    rec.priority = entry->priority;

    TrialOutcome outcome;
    try {
      const auto compiled_result = judge_.compile(program);
      if (const auto* ok = std::get_if<CompileSuccess>(&compiled_result)) {
        const double lp = selection_log_prob(sel, instance_.candidate_lists);
        if (!best_compiling_ || lp > best_compiling_log_prob_) {
          best_compiling_ = sel;
          best_compiling_log_prob_ = lp;
        }
        outcome = run_public_tests(judge_, *ok->artifact, public_tests_);
      } else {
        outcome = to_outcome(std::get<CompileFailure>(compiled_result), program.source);
      }
    } catch (const JudgeInfrastructureError& e) {
      result_.status = SearchStatus::InfrastructureFailure;
      result_.error = e.what();
      rec.outcome = "infrastructure_error";
      rec.message = e.what();
      rec.budget_remaining = budget - trials;
      records.push_back(std::move(rec));
      break;
    }
    rec.outcome = outcome_name(outcome);

    if (is_accepted(outcome)) {
      rec.budget_remaining = budget - trials;
      records.push_back(std::move(rec));
      result_.status = SearchStatus::Accepted;
      result_.accepting_trial = trials;
      result_.program = std::move(program.source);
      result_.program_selection = sel;
      result_.blacklist_size = blacklist_.size();
      return std::move(result_);
    }

    Verdict verdict = Abstain{};
    std::vector<ProbeRecord> probes;
    if (const auto* ce = std::get_if<CompileErrorOutcome>(&outcome)) {
      rec.reported_line = ce->reported_logical_line;
      rec.message = ce->message;
      if (localizer_) {
        LocalizationRequest request{instance_, sel, ce->reported_logical_line, ce->message,
                                    budget - trials};
        auto loc = localizer_->localize(request, judge_);
        verdict = loc.verdict;
        probes = std::move(loc.probes);
        trials += loc.probes_used;
      }
    }
    rec.verdict = describe(verdict);
    rec.budget_remaining = budget - (trials - probes.size());
    records.push_back(std::move(rec));
    std::size_t probe_trial = trials - probes.size();
    for (const auto& p : probes) {
      TrialRecord pr;
      pr.trial = ++probe_trial;
      pr.kind = TrialKind::Probe;
      pr.selection = sel;
      pr.prefix_len = p.prefix_len;
      pr.outcome = p.failed ? "compile_error" : "compile_ok";
      pr.reported_line = p.reported_line;
      pr.message = p.message;
      pr.budget_remaining = budget - probe_trial;
      records.push_back(std::move(pr));
    }

    apply(verdict, sel);
    push_successors(frontier_, explored_, pruned_, blacklist_, sel, space_);
  }

  result_.blacklist_size = blacklist_.size();
  if (result_.status != SearchStatus::InfrastructureFailure) finish_with_fallback();
  return std::move(result_);
}

}  // namespace

SearchResult best_first_search(const ProblemInstance& instance, Judge& judge,
                               Localizer* localizer, const SearchConfig& config) {
  SearchRun run(instance, judge, localizer, config);
  return run.run();
}

}  // namespace pseudosynth
