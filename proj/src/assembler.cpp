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

#include "pseudosynth/assembler.hpp"

#include <algorithm>

namespace pseudosynth {

namespace {

constexpr std::string_view kIndentUnit = "  ";

class Emitter {
public:
  void emit(std::string_view text, int indent, std::optional<std::size_t> logical) {
    std::size_t start = 0;
    while (true) {
      const auto nl = text.find('\n', start);
      const auto piece = text.substr(start, nl == std::string_view::npos
                                                ? std::string_view::npos
                                                : nl - start);
      for (int k = 0; k < indent; ++k) out_.text += kIndentUnit;
      out_.text += piece;
      out_.text += '\n';
      out_.line_map.push_back(logical);
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
  }

  void emit_raw_block(std::string_view block) {
    std::size_t start = 0;
    while (start < block.size()) {
      auto nl = block.find('\n', start);
      if (nl == std::string_view::npos) nl = block.size();
      out_.text.append(block.substr(start, nl - start));
      out_.text += '\n';
      out_.line_map.push_back(std::nullopt);
      start = nl + 1;
    }
  }

  void close_braces(int count, int from_indent) {
    for (int k = 0; k < count; ++k)
      emit("}", std::max(0, from_indent - 1 - k), std::nullopt);
  }

  AssembledSource take() { return std::move(out_); }

private:
  AssembledSource out_;
};

}  // namespace

std::optional<std::size_t> AssembledSource::first_physical_line(
    std::size_t logical) const {
  for (std::size_t k = 0; k < line_map.size(); ++k)
    if (line_map[k] == logical) return k + 1;
  return std::nullopt;
}

int count_open_braces(std::string_view code) {
  enum class State { Code, String, Char, LineComment, BlockComment };
  State state = State::Code;
  int balance = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    const char c = code[i];
    const char next = i + 1 < code.size() ? code[i + 1] : '\0';
    switch (state) {
      case State::Code:
        if (c == '"') state = State::String;
        else if (c == '\'') state = State::Char;
        else if (c == '/' && next == '/') { state = State::LineComment; ++i; }
        else if (c == '/' && next == '*') { state = State::BlockComment; ++i; }
        else if (c == '{') ++balance;
        else if (c == '}') --balance;
        break;
      case State::String:
      case State::Char:
        if (c == '\\' && next != '\n') ++i;
        else if (c == '\n') state = State::Code;
        else if ((state == State::String && c == '"') ||
                 (state == State::Char && c == '\''))
          state = State::Code;
        break;
      case State::LineComment:
        if (c == '\n') state = State::Code;
        break;
      case State::BlockComment:
        if (c == '*' && next == '/') { state = State::Code; ++i; }
        break;
    }
  }
  return balance;
}

int leading_closers(std::string_view code) {
  int n = 0;
  for (char c : code) {
    if (c == '}') ++n;
    else if (c != ' ' && c != '\t') break;
  }
  return n;
}

AssembledSource assemble_code(std::span<const PseudocodeLine> lines,
                              std::span<const std::string> code,
                              std::string_view preamble,
                              std::optional<std::size_t> prefix_len) {
  validate_lines(lines);
  if (code.size() != lines.size())
    throw StructuralError("code/line count mismatch in assembly");
  const std::size_t total = lines.size();
  const std::size_t emit_count = prefix_len.value_or(total);
  if (emit_count < 1 || emit_count > total)
    throw StructuralError("prefix length out of range");

  Emitter out;
  out.emit_raw_block(preamble);
  std::string body;
  for (std::size_t i = 0; i < emit_count; ++i) {
    out.emit(code[i], lines[i].indent, lines[i].index);
    body += code[i];
    body += '\n';
    if (i + 1 < emit_count) {
      const int drop = lines[i].indent - lines[i + 1].indent -
                       leading_closers(code[i + 1]);
      if (drop > 0) {
        out.close_braces(drop, lines[i].indent);
        body.append(static_cast<std::size_t>(drop), '}');
        body += '\n';
      }
    }
  }
  if (emit_count == total) {
    out.close_braces(lines[total - 1].indent, lines[total - 1].indent);
  } else {
    const int open = count_open_braces(body);
    if (open > 0) out.close_braces(open, open);
  }
  return out.take();
}

AssembledSource assemble(const ProblemInstance& instance,
                         const Selection& selection,
                         std::string_view preamble) {
  const auto code = selected_code(selection, instance.candidate_lists);
  return assemble_code(instance.lines, code, preamble);
}

AssembledSource complete_prefix(const ProblemInstance& instance,
                                const Selection& selection,
                                std::size_t prefix_len,
                                std::string_view preamble) {
  const auto code = selected_code(selection, instance.candidate_lists);
  if (prefix_len == instance.num_lines())
    return assemble_code(instance.lines, code, preamble);
  return assemble_code(instance.lines, code, preamble, prefix_len);
}

std::optional<std::size_t> map_physical_to_logical(const AssembledSource& src,
                                                   std::size_t physical_line) {
  if (physical_line < 1 || physical_line > src.line_map.size())
    return std::nullopt;
  for (std::size_t k = physical_line; k >= 1; --k)
    if (src.line_map[k - 1]) return src.line_map[k - 1];
  return std::nullopt;
}

}  // namespace pseudosynth
