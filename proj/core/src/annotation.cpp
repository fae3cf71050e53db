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

#include "kbqa/annotation.hpp"

#include <algorithm>

#include "kbqa/error.hpp"
#include "kbqa/text.hpp"

namespace kbqa {

std::optional<std::string_view> Annotation::feature(std::string_view name) const {
  auto it = features.find(name);
  if (it == features.end()) return std::nullopt;
  return std::string_view(it->second);
}

Document::Document(std::string text) : text_(std::move(text)) {
  for (std::size_t i = 0; i < text_.size(); ++i) {
    if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) offsets_.push_back(i);
  }
  offsets_.push_back(text_.size());
  for (char32_t c : text::decode(text_)) space_.push_back(text::is_space(c));
  space_.resize(length(), false);
}

std::size_t Document::skip_space(std::size_t pos) const noexcept {
  while (pos < space_.size() && space_[pos]) ++pos;
  return pos;
}

void Document::check_span(Span span) const {
  if (span.start > span.end || span.end > length()) {
    throw RangeError("span (" + std::to_string(span.start) + "," +
                     std::to_string(span.end) + ") outside document of length " +
                     std::to_string(length()));
  }
}

bool Document::before(AnnotationId a, AnnotationId b) const {
  const auto& x = get(a);
  const auto& y = get(b);
  if (x.span.start != y.span.start) return x.span.start < y.span.start;
  if (x.span.end != y.span.end) return x.span.end > y.span.end;
  return x.id < y.id;
}

AnnotationId Document::add(std::string type, Span span, FeatureMap features) {
  if (type.empty()) throw ValidationError("annotation type name must not be empty");
  check_span(span);
  AnnotationId id = next_id_++;
  index_.emplace(id, annotations_.size());
  annotations_.push_back(Annotation{id, type, span, std::move(features)});
  auto& ids = by_type_[type];
  auto pos = std::upper_bound(ids.begin(), ids.end(), id,
                              [this](AnnotationId a, AnnotationId b) { return before(a, b); });
  ids.insert(pos, id);
  return id;
}

void Document::set_feature(AnnotationId id, std::string name, std::string value) {
  auto it = index_.find(id);
  if (it == index_.end()) throw LookupError("unknown annotation id " + std::to_string(id));
  annotations_[it->second].features[std::move(name)] = std::move(value);
}

const Annotation& Document::get(AnnotationId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw LookupError("unknown annotation id " + std::to_string(id));
  return annotations_[it->second];
}

std::string Document::substr(Span span) const {
  check_span(span);
  return text_.substr(offsets_[span.start], offsets_[span.end] - offsets_[span.start]);
}

std::string Document::covered_text(AnnotationId id) const { return substr(get(id).span); }

const std::vector<AnnotationId>& Document::of_type(std::string_view type) const {
  static const std::vector<AnnotationId> kEmpty;
  auto it = by_type_.find(type);
  return it == by_type_.end() ? kEmpty : it->second;
}

std::vector<AnnotationId> Document::starting_at(std::string_view type,
                                                std::size_t start) const {
  const auto& ids = of_type(type);
  auto lo = std::partition_point(ids.begin(), ids.end(),
                                 [&](AnnotationId a) { return get(a).span.start < start; });
  std::vector<AnnotationId> out;
  for (auto it = lo; it != ids.end() && get(*it).span.start == start; ++it) out.push_back(*it);
  return out;
}

std::vector<AnnotationId> Document::starting_at(std::size_t start) const {
  std::vector<AnnotationId> out;
  for (const auto& a : annotations_) {
    if (a.span.start == start) out.push_back(a.id);
  }
  std::sort(out.begin(), out.end(), [this](AnnotationId a, AnnotationId b) { return before(a, b); });
  return out;
}

std::vector<AnnotationId> Document::find_within(
    Span outer, std::string_view type,
    const std::optional<FeatureConstraint>& constraint) const {
  check_span(outer);
  std::vector<AnnotationId> out;
  for (AnnotationId id : of_type(type)) {
    const auto& a = get(id);
    if (!outer.contains(a.span)) continue;
    if (constraint) {
      auto v = a.feature(constraint->first);
      if (!v || *v != constraint->second) continue;
    }
    out.push_back(id);
  }
  return out;
}

nlohmann::json Document::to_json() const {
  nlohmann::json anns = nlohmann::json::array();
  std::vector<AnnotationId> ordered;
  ordered.reserve(annotations_.size());
  for (const auto& a : annotations_) ordered.push_back(a.id);
  std::sort(ordered.begin(), ordered.end(),
            [this](AnnotationId a, AnnotationId b) { return before(a, b); });
  for (AnnotationId id : ordered) {
    const auto& a = get(id);
    nlohmann::json feats = nlohmann::json::object();
    for (const auto& [k, v] : a.features) feats[k] = v;
    anns.push_back({{"id", a.id},
                    {"type", a.type},
                    {"start", a.span.start},
                    {"end", a.span.end},
                    {"features", feats}});
  }
  return {{"text", text_}, {"annotations", anns}};
}

Document Document::from_json(const nlohmann::json& j) {
  Document doc(j.at("text").get<std::string>());
  std::vector<nlohmann::json> anns;
  if (j.contains("annotations")) {
    for (const auto& a : j.at("annotations")) anns.push_back(a);
  }
  // Reinsert in id order so ids are reproduced exactly.
  std::sort(anns.begin(), anns.end(), [](const auto& a, const auto& b) {
    return a.at("id").template get<AnnotationId>() < b.at("id").template get<AnnotationId>();
  });
  for (const auto& a : anns) {
    auto id = a.at("id").get<AnnotationId>();
    if (doc.index_.count(id)) throw ValidationError("duplicate annotation id " + std::to_string(id));
    FeatureMap feats;
    if (a.contains("features")) {
      for (const auto& [k, v] : a.at("features").items()) feats[k] = v.get<std::string>();
    }
    doc.next_id_ = id;
    doc.add(a.at("type").get<std::string>(),
            Span{a.at("start").get<std::size_t>(), a.at("end").get<std::size_t>()},
            std::move(feats));
  }
  return doc;
}

}  // namespace kbqa
