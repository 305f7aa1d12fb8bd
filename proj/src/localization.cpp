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

#include "pseudosynth/localization.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include <json.hpp>

namespace pseudosynth {

using nlohmann::json;

std::string describe(const Verdict& verdict) {
  if (const auto* d = std::get_if<DownWeight>(&verdict))
    return "down_weight:" + std::to_string(d->line);
  if (const auto* b = std::get_if<BlacklistPrefix>(&verdict))
    return "blacklist_prefix:" + std::to_string(b->prefix_len);
  return "abstain";
}

LocalizationResult ReportedLineLocalizer::localize(const LocalizationRequest& request, Judge&) {
  LocalizationResult result;
  if (request.i_err) result.verdict = DownWeight{*request.i_err};
  return result;
}

PrefixPruningLocalizer::PrefixPruningLocalizer(std::string preamble,
                                               std::vector<std::size_t> offsets)
    : preamble_(std::move(preamble)), offsets_(std::move(offsets)) {}

std::vector<std::size_t> PrefixPruningLocalizer::probe_lengths(std::size_t i_err) const {
  std::vector<std::size_t> lengths;
  for (std::size_t delta : offsets_)
    lengths.push_back(delta + 1 > i_err ? 1 : i_err - delta);
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
  return lengths;
}

LocalizationResult PrefixPruningLocalizer::localize(const LocalizationRequest& request,
                                                    Judge& judge) {
  LocalizationResult result;
  if (!request.i_err) return result;
  const auto& sel = request.selection;
  const std::size_t num_lines = request.instance.num_lines();
  // The full program was just observed to fail.
  memo_[sel.ranks()] = true;

  for (std::size_t len : probe_lengths(std::min(*request.i_err, num_lines))) {
    std::vector<std::size_t> key(sel.ranks().begin(), sel.ranks().begin() + len);
    bool fails = false;
    if (auto it = memo_.find(key); it != memo_.end()) {
      fails = it->second;
    } else {
      if (result.probes_used >= request.probe_allowance) return result;
      Program program{complete_prefix(request.instance, sel, len, preamble_), sel, len};
      ++result.probes_used;
      CompileResult compiled_result;
      try {
        compiled_result = judge.compile(program);
      } catch (const JudgeInfrastructureError& e) {
        result.probes.push_back({len, false, std::nullopt, e.what()});
        result.verdict = Abstain{};
        return result;
      }
      ProbeRecord record;
      record.prefix_len = len;
      if (const auto* failure = std::get_if<CompileFailure>(&compiled_result)) {
        fails = true;
        const auto outcome = to_outcome(*failure, program.source);
        record.reported_line = outcome.reported_logical_line;
        record.message = outcome.message;
      }
      record.failed = fails;
      result.probes.push_back(std::move(record));
      memo_.emplace(std::move(key), fails);
    }
    if (fails) {
      result.verdict = BlacklistPrefix{len};
      return result;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::string encode_classifier_request(const ClassifierRequest& request) {
  json j;
  j["version"] = kClassifierProtocolVersion;
  j["pseudocode"] = request.pseudocode;
  j["code"] = request.code;
  j["i_err"] = request.i_err;
  j["m_err"] = request.m_err;
  return j.dump();
}

std::optional<ClassifierRequest> decode_classifier_request(const std::string& line) {
  try {
    const auto j = json::parse(line);
    if (j.value("version", 0) != kClassifierProtocolVersion) return std::nullopt;
    ClassifierRequest r;
    r.pseudocode = j.at("pseudocode").get<std::vector<std::string>>();
    r.code = j.at("code").get<std::vector<std::string>>();
    r.i_err = j.at("i_err").get<std::size_t>();
    r.m_err = j.at("m_err").get<std::string>();
    if (r.pseudocode.size() != r.code.size()) return std::nullopt;
    return r;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::string encode_classifier_response(const ClassifierResponse& response) {
  json j;
  j["line"] = response.line;
  j["confidence"] = response.confidence;
  return j.dump();
}

std::optional<ClassifierResponse> decode_classifier_response(const std::string& line,
                                                             std::size_t num_lines) {
  try {
    const auto j = json::parse(line);
    if (!j.is_object() || !j.at("line").is_number_integer() || !j.at("confidence").is_number())
      return std::nullopt;
    const auto raw_line = j.at("line").get<long long>();
    ClassifierResponse r;
    r.confidence = j.at("confidence").get<double>();
    if (raw_line < 1 || static_cast<std::size_t>(raw_line) > num_lines) return std::nullopt;
    if (!std::isfinite(r.confidence) || r.confidence < 0.0 || r.confidence > 1.0)
      return std::nullopt;
    r.line = static_cast<std::size_t>(raw_line);
    return r;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

ClassifierResponse heuristic_classify(const ClassifierRequest& request) {
  static const std::regex undeclared(R"('([A-Za-z_][A-Za-z0-9_]*)' was not declared)");
  std::smatch m;
  if (std::regex_search(request.m_err, m, undeclared)) {
    const std::regex word("\\b" + m[1].str() + "\\b");
    const std::size_t limit = std::min(request.i_err, request.pseudocode.size() + 1);
    for (std::size_t i = 1; i < limit; ++i)
      if (std::regex_search(request.pseudocode[i - 1], word)) return {i, 0.97};
  }
  return {std::max<std::size_t>(request.i_err, 1), 0.6};
}

ProcessClassifierBackend::ProcessClassifierBackend(std::vector<std::string> argv,
                                                   std::chrono::milliseconds timeout)
    : argv_(std::move(argv)), timeout_(timeout) {}

std::optional<ClassifierResponse> ProcessClassifierBackend::query(
    const ClassifierRequest& request, std::size_t num_lines) {
  try {
    if (!process_) process_ = std::make_unique<PipedProcess>(argv_);
  } catch (const ProcessError&) {
    return std::nullopt;
  }
  if (!process_->write_line(encode_classifier_request(request))) return std::nullopt;
  const auto line = process_->read_line(timeout_);
  if (!line) return std::nullopt;
  return decode_classifier_response(*line, num_lines);
}

std::optional<ClassifierResponse> HeuristicClassifierBackend::query(
    const ClassifierRequest& request, std::size_t num_lines) {
  auto r = heuristic_classify(request);
  if (r.line < 1 || r.line > num_lines) return std::nullopt;
  return r;
}

ClassifierLocalizer::ClassifierLocalizer(std::shared_ptr<ClassifierBackend> backend,
                                         double threshold)
    : backend_(std::move(backend)), threshold_(threshold) {}

LocalizationResult ClassifierLocalizer::localize(const LocalizationRequest& request, Judge&) {
  LocalizationResult result;
  if (!healthy_ || !request.i_err) return result;
  ClassifierRequest q;
  for (const auto& line : request.instance.lines) q.pseudocode.push_back(line.text);
  q.code = selected_code(request.selection, request.instance.candidate_lists);
  q.i_err = *request.i_err;
  q.m_err = request.m_err;
  const auto response = backend_->query(q, request.instance.num_lines());
  if (!response) {
    healthy_ = false;
    return result;
  }
  if (response->confidence > threshold_) result.verdict = DownWeight{response->line};
  return result;
}

// ---------------------------------------------------------------------------

std::string to_json_line(const LocalizerTrainingRecord& record) {
  json j;
  j["problem"] = record.problem_id;
  j["pseudocode"] = record.pseudocode;
  j["code"] = record.code;
  j["i_err"] = record.i_err ? json(*record.i_err) : json(nullptr);
  j["m_err"] = record.m_err;
  j["label"] = record.label;
  return j.dump();
}

std::vector<LocalizerTrainingRecord> generate_localizer_training_data(
    const std::vector<GoldProgram>& gold_programs, Judge& judge, std::string_view preamble,
    TrainingDataStats* stats) {
  TrainingDataStats local;
  TrainingDataStats& st = stats ? *stats : local;
  std::vector<LocalizerTrainingRecord> records;
  for (const auto& gold : gold_programs) {
    const auto& inst = *gold.instance;
    if (gold.code.size() != inst.num_lines())
      throw StructuralError("gold program for " + inst.id + " has wrong line count");
    Program base{assemble_code(inst.lines, gold.code, preamble), gold.as_selection,
                 inst.num_lines()};
    ++st.compiles;
    if (!compiled(judge.compile(base))) {
      ++st.skipped_programs;
      st.warnings.push_back("gold program for " + inst.id + " does not compile; skipped");
      continue;
    }
    std::vector<std::string> pseudocode;
    for (const auto& line : inst.lines) pseudocode.push_back(line.text);
    for (std::size_t i = 1; i <= inst.num_lines(); ++i) {
      const auto& list = inst.candidate_lists[i - 1];
      for (const auto& cand : list.candidates) {
        if (cand.code == gold.code[i - 1]) continue;
        auto mutated = gold.code;
        mutated[i - 1] = cand.code;
        Program program{assemble_code(inst.lines, mutated, preamble), std::nullopt,
                        inst.num_lines()};
        if (gold.as_selection) {
          auto ranks = gold.as_selection->ranks();
          ranks[i - 1] = cand.rank;
          program.selection = Selection(std::move(ranks));
        }
        ++st.compiles;
        const auto result = judge.compile(program);
        const auto* failure = std::get_if<CompileFailure>(&result);
        if (!failure) continue;
        const auto outcome = to_outcome(*failure, program.source);
        records.push_back({inst.id, pseudocode, std::move(mutated),
                           outcome.reported_logical_line, outcome.message, i});
      }
    }
  }
  return records;
}

}  // namespace pseudosynth
