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

#include "pseudosynth/mock_judge.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace pseudosynth {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "pseudosynth-mock";
constexpr int kVersion = 1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const char* kind_name(MockLabelKind kind) {
  switch (kind) {
    case MockLabelKind::Correct: return "correct";
    case MockLabelKind::CompileBad: return "compile_bad";
    case MockLabelKind::SemanticBad: return "semantic_bad";
  }
  return "correct";
}

MockLabelKind parse_kind(const std::string& s) {
  if (s == "correct") return MockLabelKind::Correct;
  if (s == "compile_bad") return MockLabelKind::CompileBad;
  if (s == "semantic_bad") return MockLabelKind::SemanticBad;
  throw StructuralError("unknown mock label '" + s + "'");
}

MockErrorClass parse_error_class(const std::string& s) {
  for (auto cls : {MockErrorClass::UndeclaredIdentifier, MockErrorClass::Redeclaration,
                   MockErrorClass::TypeMismatch, MockErrorClass::StrayToken})
    if (to_string(cls) == s) return cls;
  throw StructuralError("unknown mock error class '" + s + "'");
}

std::string default_code(std::size_t line, std::size_t rank) {
  return "stmt_" + std::to_string(line) + "_" + std::to_string(rank) + "();";
}

}  // namespace

std::string to_string(MockErrorClass cls) {
  switch (cls) {
    case MockErrorClass::UndeclaredIdentifier: return "undeclared_identifier";
    case MockErrorClass::Redeclaration: return "redeclaration";
    case MockErrorClass::TypeMismatch: return "type_mismatch";
    case MockErrorClass::StrayToken: return "stray_token";
  }
  return "undeclared_identifier";
}

std::string mock_error_message(MockErrorClass cls, std::size_t line) {
  const std::string var = "v" + std::to_string(line);
  switch (cls) {
    case MockErrorClass::UndeclaredIdentifier:
      return "'" + var + "' was not declared in this scope";
    case MockErrorClass::Redeclaration:
      return "redeclaration of 'int " + var + "'";
    case MockErrorClass::TypeMismatch:
      return "no match for 'operator>>' (operand types are 'std::istream' and '" +
             var + "')";
    case MockErrorClass::StrayToken:
      return "expected ';' before '}' token";
  }
  return {};
}

void validate(const MockScenario& scenario) {
  validate(scenario.instance);
  const auto& lists = scenario.instance.candidate_lists;
  const auto& spec = scenario.spec;
  if (spec.labels.size() != lists.size())
    throw StructuralError("mock spec has " + std::to_string(spec.labels.size()) +
                          " label rows for " + std::to_string(lists.size()) + " lines");
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (spec.labels[i].size() != lists[i].size())
      throw StructuralError("mock spec line " + std::to_string(i + 1) +
                            ": one label per candidate required");
    for (const auto& label : spec.labels[i])
      for (const auto& pick : label.context)
        if (pick.line < 1 || pick.line > lists.size() || pick.rank < 1 ||
            pick.rank > lists[pick.line - 1].size())
          throw StructuralError("mock spec line " + std::to_string(i + 1) +
                                ": context pick out of range");
  }
  if (spec.offset_weights.empty() ||
      std::any_of(spec.offset_weights.begin(), spec.offset_weights.end(),
                  [](double w) { return !(w >= 0.0); }) ||
      std::accumulate(spec.offset_weights.begin(), spec.offset_weights.end(), 0.0) <= 0.0)
    throw StructuralError("offset weights must be non-negative with positive sum");
  check_selection(scenario.gold, lists);
  for (std::size_t i = 1; i <= lists.size(); ++i)
    if (spec.label(i, scenario.gold.rank(i)).kind != MockLabelKind::Correct)
      throw StructuralError("gold selection uses a non-Correct candidate on line " +
                            std::to_string(i));
}

std::size_t draw_offset(const MockSpec& spec, const Selection& selection) {
  std::uint64_t h = splitmix64(spec.seed);
  for (std::size_t r : selection.ranks()) h = splitmix64(h ^ r);
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  const double total =
      std::accumulate(spec.offset_weights.begin(), spec.offset_weights.end(), 0.0);
  double acc = 0.0;
  for (std::size_t delta = 0; delta < spec.offset_weights.size(); ++delta) {
    acc += spec.offset_weights[delta] / total;
    if (u < acc) return delta;
  }
  return spec.offset_weights.size() - 1;
}

std::optional<std::size_t> true_offender(const MockSpec& spec,
                                         const Selection& selection,
                                         std::size_t prefix_len) {
  for (std::size_t i = 1; i <= prefix_len; ++i) {
    const auto& label = spec.label(i, selection.rank(i));
    if (label.kind != MockLabelKind::CompileBad) continue;
    const bool context_holds =
        std::all_of(label.context.begin(), label.context.end(), [&](const LinePick& p) {
          return p.line <= prefix_len && selection.rank(p.line) == p.rank;
        });
    if (context_holds) return i;
  }
  return std::nullopt;
}

MockJudge::MockJudge(const ProblemInstance& instance, MockSpec spec)
    : num_lines_(instance.num_lines()), spec_(std::move(spec)) {
  if (spec_.labels.size() != num_lines_)
    throw StructuralError("mock spec does not match instance");
}

CompileResult MockJudge::compile(const Program& program) {
  if (!program.selection)
    throw JudgeInfrastructureError("mock judge can only compile selections");
  const auto& sel = *program.selection;
  if (sel.size() != num_lines_)
    throw JudgeInfrastructureError("selection length does not match mock spec");
  const std::size_t prefix =
      program.prefix_len == 0 ? num_lines_ : std::min(program.prefix_len, num_lines_);
  const auto offender = true_offender(spec_, sel, prefix);
  if (!offender) {
    auto artifact = std::make_shared<Artifact>();
    artifact->selection = sel;
    return CompileSuccess{std::move(artifact)};
  }
  const auto& label = spec_.label(*offender, sel.rank(*offender));
  const std::size_t delta = label.fixed_offset.value_or(draw_offset(spec_, sel));
  const std::size_t reported = std::min(*offender + delta, prefix);
  CompileFailure failure;
  failure.physical_line = program.source.first_physical_line(reported);
  failure.column = 1;
  failure.message = mock_error_message(label.error_class, *offender);
  failure.raw_stderr = "main.cpp:" +
                       std::to_string(failure.physical_line.value_or(0)) +
                       ":1: error: " + failure.message + "\n";
  return failure;
}

RunResult MockJudge::run(const Artifact& artifact, const TestCase&) {
  if (!artifact.selection)
    throw JudgeInfrastructureError("mock artifact without selection");
  const auto& sel = *artifact.selection;
  for (std::size_t i = 1; i <= sel.size(); ++i)
    if (spec_.label(i, sel.rank(i)).kind == MockLabelKind::SemanticBad)
      return RunWrongOutput{"mock wrong output"};
  return RunPassed{};
}

MockScenario parse_mock_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw StructuralError(std::string("mock scenario: ") + e.what());
  }
  try {
    if (doc.value("format", std::string{}) != kFormat)
      throw StructuralError("mock scenario: missing format tag '" + std::string(kFormat) + "'");
    if (doc.value("version", 0) != kVersion)
      throw StructuralError("mock scenario: unsupported version");
    MockScenario sc;
    sc.instance.id = doc.value("id", std::string("mock"));
    sc.instance.budget = doc.value("budget", std::size_t{100});
    sc.tag = doc.value("tag", std::string{});
    sc.spec.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("offset_weights"))
      sc.spec.offset_weights = doc.at("offset_weights").get<std::vector<double>>();
    std::size_t index = 0;
    for (const auto& jl : doc.at("lines")) {
      ++index;
      PseudocodeLine line;
      line.index = index;
      line.text = jl.value("text", "line " + std::to_string(index));
      line.indent = jl.value("indent", 0);
      CandidateList list;
      list.line_index = index;
      std::vector<MockLabel> labels;
      std::size_t rank = 0;
      for (const auto& jc : jl.at("candidates")) {
        ++rank;
        Candidate c;
        c.rank = rank;
        c.log_prob = jc.at("log_prob").get<double>();
        c.code = jc.value("code", default_code(index, rank));
        list.candidates.push_back(std::move(c));
        MockLabel label;
        label.kind = parse_kind(jc.value("label", std::string("correct")));
        if (jc.contains("error"))
          label.error_class = parse_error_class(jc.at("error").get<std::string>());
        if (jc.contains("offset")) label.fixed_offset = jc.at("offset").get<std::size_t>();
        if (jc.contains("context"))
          for (const auto& p : jc.at("context"))
            label.context.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
        labels.push_back(std::move(label));
      }
      sc.instance.lines.push_back(std::move(line));
      sc.instance.candidate_lists.push_back(std::move(list));
      sc.spec.labels.push_back(std::move(labels));
    }
    sc.instance.tests.push_back({"", "", Visibility::Public});
    sc.gold = Selection(doc.at("gold").get<std::vector<std::size_t>>());
    validate(sc);
    return sc;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("mock scenario: ") + e.what());
  }
}

std::string serialize_mock_scenario(const MockScenario& sc) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["id"] = sc.instance.id;
  if (!sc.tag.empty()) doc["tag"] = sc.tag;
  doc["budget"] = sc.instance.budget;
  doc["seed"] = sc.spec.seed;
  doc["offset_weights"] = sc.spec.offset_weights;
  doc["gold"] = sc.gold.ranks();
  json lines = json::array();
  for (std::size_t i = 0; i < sc.instance.lines.size(); ++i) {
    json jl;
    jl["text"] = sc.instance.lines[i].text;
    jl["indent"] = sc.instance.lines[i].indent;
    json cands = json::array();
    for (std::size_t r = 0; r < sc.instance.candidate_lists[i].size(); ++r) {
      const auto& c = sc.instance.candidate_lists[i].candidates[r];
      const auto& label = sc.spec.labels[i][r];
      json jc;
      jc["code"] = c.code;
      jc["log_prob"] = c.log_prob;
      jc["label"] = kind_name(label.kind);
      if (label.kind == MockLabelKind::CompileBad) {
        jc["error"] = to_string(label.error_class);
        if (!label.context.empty()) {
          json ctx = json::array();
          for (const auto& p : label.context) ctx.push_back({p.line, p.rank});
          jc["context"] = ctx;
        }
        if (label.fixed_offset) jc["offset"] = *label.fixed_offset;
      }
      cands.push_back(std::move(jc));
    }
    jl["candidates"] = std::move(cands);
    lines.push_back(std::move(jl));
  }
  doc["lines"] = std::move(lines);
  return doc.dump(2) + "\n";
}

MockScenario load_mock_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_mock_scenario(buf.str());
  } catch (const StructuralError& e) {
    throw StructuralError(path.string() + ": " + e.what());
  }
}

void save_mock_scenario(const MockScenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << serialize_mock_scenario(scenario);
  if (!out) throw StructuralError("cannot write " + path.string());
}

}  // namespace pseudosynth
