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

#include <string>
#include <string_view>

namespace kbqa {

enum class Language { kVi, kEn };

std::string to_string(Language lang);
/// Accepts "vi" / "en"; throws ValidationError otherwise.
Language parse_language(std::string_view name);

/// Name of the base token layer: TokenVn for Vietnamese, Token for English.
std::string_view base_type(Language lang);

}  // namespace kbqa
