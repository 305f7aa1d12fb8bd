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

// Reference classifier process: reads one JSON request per line on stdin,
// answers with one JSON response per line on stdout.

#include <iostream>
#include <string>

#include "pseudosynth/localization.hpp"

int main() {
  std::ios::sync_with_stdio(false);
  std::string line;
  while (std::getline(std::cin, line)) {
    auto request = pseudosynth::decode_classifier_request(line);
    if (!request) {
      std::cerr << "heuristic_classifier: malformed request\n";
      return 2;
    }
    std::cout << pseudosynth::encode_classifier_response(pseudosynth::heuristic_classify(*request))
              << std::endl;
  }
  return 0;
}
