// Copyright 2026 The kbqa Authors
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

#include "kbqa/error.hpp"

namespace kbqa {

namespace {

std::string describe(const std::string& message, int line, int column,
                     const std::vector<std::string>& expected) {
  std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::string message, int line, int column,
                       std::vector<std::string> expected)
    : Error(describe(message, line, column, expected)),
      line_(line), column_(column), expected_(std::move(expected)) {}

ParseError::ParseError(Formatted, std::string what, int line, int column,
                       std::vector<std::string> expected)
    : Error(std::move(what)), line_(line), column_(column), expected_(std::move(expected)) {}

ParseError ParseError::located(const std::string& source, const std::string& message, int line,
                               int column) {
  std::string what = source + ": " + message;
  if (line > 0) {
    what = source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }
  return ParseError(Formatted{}, std::move(what), line, column, {});
}

ParseError ParseError::in(const std::string& context) const {
  return ParseError(Formatted{}, context + ": " + what(), line_, column_, expected_);
}

}  // namespace kbqa
