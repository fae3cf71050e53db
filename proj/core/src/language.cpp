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

#include "kbqa/language.hpp"

#include "kbqa/error.hpp"

namespace kbqa {

std::string to_string(Language lang) { return lang == Language::kVi ? "vi" : "en"; }

Language parse_language(std::string_view name) {
  if (name == "vi") return Language::kVi;
  if (name == "en") return Language::kEn;
  throw ValidationError("unknown language '" + std::string(name) + "' (expected vi or en)");
}

std::string_view base_type(Language lang) {
  return lang == Language::kVi ? "TokenVn" : "Token";
}

}  // namespace kbqa
