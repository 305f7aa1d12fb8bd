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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pseudosynth/judge.hpp"

namespace pseudosynth {

enum class MockLabelKind { Correct, CompileBad, SemanticBad };

enum class MockErrorClass { UndeclaredIdentifier, Redeclaration, TypeMismatch, StrayToken };

struct LinePick {
  std::size_t line = 0;
  std::size_t rank = 0;
  friend bool operator==(const LinePick&, const LinePick&) = default;
};

struct MockLabel {
  MockLabelKind kind = MockLabelKind::Correct;
  /// CompileBad only: the candidate fails only when every pick here is also
  /// selected. Empty means context-free.
  std::vector<LinePick> context;
  MockErrorClass error_class = MockErrorClass::UndeclaredIdentifier;
  /// Overrides the random report offset for this candidate.
  std::optional<std::size_t> fixed_offset;
};

inline const std::vector<double> kDefaultOffsetWeights = {0.783, 0.15, 0.067};

struct MockSpec {
  /// labels[line - 1][rank - 1]
  std::vector<std::vector<MockLabel>> labels;
  /// Weight of reporting the error delta lines after the true offender.
  std::vector<double> offset_weights = kDefaultOffsetWeights;
  std::uint64_t seed = 0;

  const MockLabel& label(std::size_t line, std::size_t rank) const {
    return labels.at(line - 1).at(rank - 1);
  }
};

/// A synthetic problem together with its judge spec and gold selection.
struct MockScenario {
  ProblemInstance instance;
  MockSpec spec;
  Selection gold;
  std::string tag;  // free-form grouping label ("easy", "hard", ...)
};

/// Throws StructuralError on shape mismatches or a gold selection that is
/// not all-Correct.
void validate(const MockScenario& scenario);

/// Deterministic report offset for (seed, selection).
std::size_t draw_offset(const MockSpec& spec, const Selection& selection);

/// Earliest line <= prefix_len whose selected candidate is CompileBad in the
/// given context, if any.
std::optional<std::size_t> true_offender(const MockSpec& spec,
                                         const Selection& selection,
                                         std::size_t prefix_len);

std::string mock_error_message(MockErrorClass cls, std::size_t line);
std::string to_string(MockErrorClass cls);

/// Simulated judge. Compiles selections (never raw text) and reports the
/// first offending line shifted by a seeded offset.
class MockJudge : public Judge {
public:
  MockJudge(const ProblemInstance& instance, MockSpec spec);

  CompileResult compile(const Program& program) override;
  RunResult run(const Artifact& artifact, const TestCase& test) override;

  const MockSpec& spec() const { return spec_; }

private:
  std::size_t num_lines_;
  MockSpec spec_;
};

// Human-editable JSON fixture format ("pseudosynth-mock", version 1).
MockScenario parse_mock_scenario(const std::string& json_text);
std::string serialize_mock_scenario(const MockScenario& scenario);
MockScenario load_mock_scenario(const std::filesystem::path& path);
void save_mock_scenario(const MockScenario& scenario, const std::filesystem::path& path);

}  // namespace pseudosynth
