// Copyright 2026 The genesyn Authors.
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

#include "genesyn/dsl.hpp"
#include "genesyn/error.hpp"

namespace genesyn::dsl {

Program parse_program(std::string_view text) {
  Program program;
  std::size_t position = 0;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = text.find('|', start);
    std::string_view name = text.substr(
        start, bar == std::string_view::npos ? std::string_view::npos
                                             : bar - start);
    auto op = find_op(name);
    if (!op)
      fail(ErrorCode::kData, "unknown operation \"" + std::string(name) +
                                 "\" at statement " + std::to_string(position + 1) +
                                 " (offset " + std::to_string(start) + ")");
    program.ops.push_back(*op);
    if (bar == std::string_view::npos) break;
    start = bar + 1;
    ++position;
  }
  return program;
}

std::string format_program(const Program& program) {
  std::string out;
  for (std::size_t i = 0; i < program.length(); ++i) {
    if (i) out += '|';
    out += describe(program.ops[i]).name;
  }
  return out;
}

}  // namespace genesyn::dsl
