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

// UTF-8 helpers. All offsets exposed by the library count Unicode scalar
// values, not bytes.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kbqa::text {

std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
std::string encode(char32_t cp);

/// Number of scalar values in a UTF-8 string.
std::size_t length(std::string_view utf8);

/// Simple lower-casing covering ASCII, Latin-1, Latin Extended-A/B and the
/// Latin Extended Additional block used by Vietnamese. Input is assumed NFC.
char32_t fold(char32_t cp);
std::string fold(std::string_view utf8);

bool is_space(char32_t cp);
bool is_punct(char32_t cp);
bool is_upper(char32_t cp);
bool is_digit(char32_t cp);

/// Collapse runs of whitespace to a single space and trim both ends.
std::string normalize_space(std::string_view utf8);

/// fold + normalize_space; the comparison key for surface strings.
std::string key(std::string_view utf8);

std::vector<std::string> split_words(std::string_view utf8);
std::string join(const std::vector<std::string>& words, std::string_view sep = " ");

/// Levenshtein distance over scalar values.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

}  // namespace kbqa::text
