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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace kbqa {

/// Half-open range of scalar-value offsets into a document's text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start; }
  bool contains(const Span& other) const noexcept {
    return start <= other.start && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

using AnnotationId = std::int64_t;
using FeatureMap = std::map<std::string, std::string, std::less<>>;
using FeatureConstraint = std::pair<std::string, std::string>;

struct Annotation {
  AnnotationId id = 0;
  std::string type;
  Span span;
  FeatureMap features;

  /// nullopt when the feature is absent; an empty value is a present feature.
  std::optional<std::string_view> feature(std::string_view name) const;
};

/// Text plus a growing set of typed annotations over it. Annotations are never
/// removed; pipeline stages post new layers. Features may be set on existing
/// annotations while a stage owns the document.
class Document {
 public:
  Document() : Document(std::string{}) {}
  explicit Document(std::string text);

  const std::string& text() const noexcept { return text_; }
  /// Length in scalar values.
  std::size_t length() const noexcept { return offsets_.size() - 1; }
  Span whole() const noexcept { return {0, length()}; }
  /// First offset >= pos that is not whitespace (or length()).
  std::size_t skip_space(std::size_t pos) const noexcept;

  AnnotationId add(std::string type, Span span, FeatureMap features = {});
  void set_feature(AnnotationId id, std::string name, std::string value);

  bool contains(AnnotationId id) const noexcept { return index_.count(id) != 0; }
  const Annotation& get(AnnotationId id) const;
  std::size_t size() const noexcept { return annotations_.size(); }
  /// Insertion order.
  const std::vector<Annotation>& annotations() const noexcept { return annotations_; }

  std::string substr(Span span) const;
  std::string covered_text(AnnotationId id) const;

  /// All annotations of a type, ordered by (start asc, end desc, id asc).
  const std::vector<AnnotationId>& of_type(std::string_view type) const;
  /// Annotations of a type that start exactly at `start`, same order.
  std::vector<AnnotationId> starting_at(std::string_view type, std::size_t start) const;
  /// Annotations of any type starting at `start`, same order.
  std::vector<AnnotationId> starting_at(std::size_t start) const;

  /// Annotations of `type` lying inside `outer` (co-extensive spans count),
  /// optionally filtered on one feature value.
  std::vector<AnnotationId> find_within(
      Span outer, std::string_view type,
      const std::optional<FeatureConstraint>& constraint = std::nullopt) const;

  nlohmann::json to_json() const;
  static Document from_json(const nlohmann::json& j);

 private:
  bool before(AnnotationId a, AnnotationId b) const;
  void check_span(Span span) const;

  std::string text_;
  std::vector<std::size_t> offsets_;  // byte offset of each scalar value, plus end
  std::vector<bool> space_;
  std::vector<Annotation> annotations_;
  std::unordered_map<AnnotationId, std::size_t> index_;
  std::map<std::string, std::vector<AnnotationId>, std::less<>> by_type_;
  AnnotationId next_id_ = 0;
};

}  // namespace kbqa
