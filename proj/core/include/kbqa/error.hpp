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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kbqa {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in rule text or a data file. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column,
             std::vector<std::string> expected = {});

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

  /// "source:line:column: message", or "source: message" when line is 0.
  static ParseError located(const std::string& source, const std::string& message, int line,
                            int column);
  /// Same position, message prefixed with "context: ".
  ParseError in(const std::string& context) const;

 private:
  struct Formatted {};
  ParseError(Formatted, std::string what, int line, int column, std::vector<std::string> expected);

  int line_;
  int column_;
  std::vector<std::string> expected_;
};

/// A new rule would change the conclusion of a stored cornerstone case.
class ConsistencyError : public Error {
 public:
  ConsistencyError(std::string message, int node_id, std::string cornerstone)
      : Error(std::move(message)), node_id_(node_id),
        cornerstone_(std::move(cornerstone)) {}

  int node_id() const noexcept { return node_id_; }
  const std::string& cornerstone() const noexcept { return cornerstone_; }

 private:
  int node_id_;
  std::string cornerstone_;
};

/// A rule draft does not fire on its own case at the attachment point.
class RuleRejected : public Error {
 public:
  using Error::Error;
};

/// A query-tuple slot could not be mapped onto the ontology.
class MappingError : public Error {
 public:
  MappingError(std::string slot, std::string term)
      : Error("cannot map " + slot + " '" + term + "' onto the ontology"),
        slot_(std::move(slot)), term_(std::move(term)) {}

  const std::string& slot() const noexcept { return slot_; }
  const std::string& term() const noexcept { return term_; }

 private:
  std::string slot_;
  std::string term_;
};

}  // namespace kbqa
