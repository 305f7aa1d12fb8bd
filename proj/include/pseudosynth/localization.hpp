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

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pseudosynth/assembler.hpp"
#include "pseudosynth/core_types.hpp"
#include "pseudosynth/judge.hpp"
#include "pseudosynth/process.hpp"

namespace pseudosynth {

struct DownWeight {
  std::size_t line = 0;
  friend bool operator==(const DownWeight&, const DownWeight&) = default;
};
struct BlacklistPrefix {
  std::size_t prefix_len = 0;
  friend bool operator==(const BlacklistPrefix&, const BlacklistPrefix&) = default;
};
struct Abstain {
  friend bool operator==(const Abstain&, const Abstain&) = default;
};

using Verdict = std::variant<DownWeight, BlacklistPrefix, Abstain>;

std::string describe(const Verdict& verdict);

/// Everything a localizer may look at after a failed compile.
struct LocalizationRequest {
  const ProblemInstance& instance;
  const Selection& selection;
  std::optional<std::size_t> i_err;  // logical line; nullopt = unmapped
  const std::string& m_err;
  std::size_t probe_allowance = 0;
};

struct ProbeRecord {
  std::size_t prefix_len = 0;
  bool failed = false;
  std::optional<std::size_t> reported_line;
  std::string message;
};

struct LocalizationResult {
  Verdict verdict = Abstain{};
  std::size_t probes_used = 0;  // == compile calls issued
  std::vector<ProbeRecord> probes;
};

/// Turns a compile failure into a search verdict. Instances are created per
/// search run and may keep per-run state; they never touch search state.
class Localizer {
public:
  virtual ~Localizer() = default;
  virtual LocalizationResult localize(const LocalizationRequest& request, Judge& judge) = 0;
  virtual std::string name() const = 0;
};

/// Blames the line the compiler reported.
class ReportedLineLocalizer : public Localizer {
public:
  LocalizationResult localize(const LocalizationRequest& request, Judge& judge) override;
  std::string name() const override { return "reported"; }
};

/// Compiles completed prefixes ending at i_err-2, i_err-1, i_err (shortest
/// first) and blacklists the first one that fails. Probe results are
/// memoized for the lifetime of the localizer.
class PrefixPruningLocalizer : public Localizer {
public:
  explicit PrefixPruningLocalizer(std::string preamble = std::string(kDefaultPreamble),
                                  std::vector<std::size_t> offsets = {0, 1, 2});
  LocalizationResult localize(const LocalizationRequest& request, Judge& judge) override;
  std::string name() const override { return "prefix"; }

  /// Prefix lengths probed for a given reported line, in probe order.
  std::vector<std::size_t> probe_lengths(std::size_t i_err) const;

private:
  std::string preamble_;
  std::vector<std::size_t> offsets_;
  std::map<std::vector<std::size_t>, bool> memo_;  // prefix ranks -> fails
};

// ---------------------------------------------------------------------------
// External classifier

struct ClassifierRequest {
  std::vector<std::string> pseudocode;
  std::vector<std::string> code;
  std::size_t i_err = 0;
  std::string m_err;
};

struct ClassifierResponse {
  std::size_t line = 0;
  double confidence = 0.0;
};

inline constexpr int kClassifierProtocolVersion = 1;

/// One JSON object per line.
std::string encode_classifier_request(const ClassifierRequest& request);
std::optional<ClassifierRequest> decode_classifier_request(const std::string& line);
std::string encode_classifier_response(const ClassifierResponse& response);
/// nullopt on malformed input, line outside 1..num_lines, or confidence
/// outside [0, 1].
std::optional<ClassifierResponse> decode_classifier_response(const std::string& line,
                                                             std::size_t num_lines);

/// Baseline classifier: for an undeclared-identifier style message, blame
/// the earliest earlier line whose pseudocode mentions the identifier;
/// otherwise blame i_err with low confidence.
ClassifierResponse heuristic_classify(const ClassifierRequest& request);

class ClassifierBackend {
public:
  virtual ~ClassifierBackend() = default;
  /// nullopt signals a protocol violation or a dead backend.
  virtual std::optional<ClassifierResponse> query(const ClassifierRequest& request,
                                                  std::size_t num_lines) = 0;
};

/// Talks to a child process over stdin/stdout, one request in flight.
class ProcessClassifierBackend : public ClassifierBackend {
public:
  explicit ProcessClassifierBackend(std::vector<std::string> argv,
                                    std::chrono::milliseconds timeout = std::chrono::seconds(10));
  std::optional<ClassifierResponse> query(const ClassifierRequest& request,
                                          std::size_t num_lines) override;

private:
  std::vector<std::string> argv_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<PipedProcess> process_;
};

/// In-process wrapper around heuristic_classify.
class HeuristicClassifierBackend : public ClassifierBackend {
public:
  std::optional<ClassifierResponse> query(const ClassifierRequest& request,
                                          std::size_t num_lines) override;
};

/// Down-weights the classifier's line when its confidence exceeds the
/// threshold. After any backend failure the adapter is marked unhealthy and
/// abstains from then on.
class ClassifierLocalizer : public Localizer {
public:
  ClassifierLocalizer(std::shared_ptr<ClassifierBackend> backend, double threshold = 0.95);
  LocalizationResult localize(const LocalizationRequest& request, Judge& judge) override;
  std::string name() const override { return "classifier"; }
  bool healthy() const { return healthy_; }

private:
  std::shared_ptr<ClassifierBackend> backend_;
  double threshold_;
  bool healthy_ = true;
};

// ---------------------------------------------------------------------------
// Training data for classifiers

struct GoldProgram {
  const ProblemInstance* instance = nullptr;
  std::vector<std::string> code;  // one gold line per logical line
  /// Set when the gold program is itself a candidate selection (mock runs).
  std::optional<Selection> as_selection;
};

struct LocalizerTrainingRecord {
  std::string problem_id;
  std::vector<std::string> pseudocode;
  std::vector<std::string> code;
  std::optional<std::size_t> i_err;
  std::string m_err;
  std::size_t label = 0;
};

std::string to_json_line(const LocalizerTrainingRecord& record);

struct TrainingDataStats {
  std::size_t compiles = 0;
  std::size_t skipped_programs = 0;
  std::vector<std::string> warnings;
};

/// Substitutes one line of each gold program at a time with every candidate
/// of that line and keeps the mutants that fail to compile. Deterministic
/// order: program, line, rank.
std::vector<LocalizerTrainingRecord> generate_localizer_training_data(
    const std::vector<GoldProgram>& gold_programs, Judge& judge,
    std::string_view preamble = kDefaultPreamble, TrainingDataStats* stats = nullptr);

}  // namespace pseudosynth
