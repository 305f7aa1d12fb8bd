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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pseudosynth/core_types.hpp"

namespace pseudosynth {

/// Header block emitted before the program body. Dataset programs assume
/// the standard library is in scope.
inline constexpr std::string_view kDefaultPreamble =
    "#include <bits/stdc++.h>\nusing namespace std;\n";

/// Source text plus a physical-line -> logical-line map. Entry k of
/// `line_map` describes physical line k + 1; nullopt marks preamble lines and
/// inserted closing braces.
struct AssembledSource {
  std::string text;
  std::vector<std::optional<std::size_t>> line_map;

  std::size_t physical_line_count() const { return line_map.size(); }
  /// First physical line emitted for a logical line, if any.
  std::optional<std::size_t> first_physical_line(std::size_t logical) const;
};

/// Structural brace balance of `code`: '{' minus '}' outside string and
/// character literals and comments. An unterminated literal runs to the end
/// of its line.
int count_open_braces(std::string_view code);

/// Number of '}' tokens the line starts with ("} else {" -> 1).
int leading_closers(std::string_view code);

/// Core assembly over explicit code lines. With `prefix_len` < lines.size()
/// only the first `prefix_len` lines are emitted and the result is completed
/// with as many braces as the body leaves open.
AssembledSource assemble_code(std::span<const PseudocodeLine> lines,
                              std::span<const std::string> code,
                              std::string_view preamble,
                              std::optional<std::size_t> prefix_len = std::nullopt);

AssembledSource assemble(const ProblemInstance& instance,
                         const Selection& selection,
                         std::string_view preamble = kDefaultPreamble);

/// Lines 1..prefix_len of the selected program, closed with braces so it
/// forms a complete translation unit. prefix_len == L equals assemble().
AssembledSource complete_prefix(const ProblemInstance& instance,
                                const Selection& selection,
                                std::size_t prefix_len,
                                std::string_view preamble = kDefaultPreamble);

/// Logical line for a 1-based physical line; inserted lines resolve to the
/// nearest preceding logical line. nullopt for the preamble or past EOF.
std::optional<std::size_t> map_physical_to_logical(const AssembledSource& src,
                                                   std::size_t physical_line);

}  // namespace pseudosynth
