// Copyright 2026 The storyeval Authors
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
#include <vector>

namespace storyeval {

using Tokens = std::vector<std::string>;

/// Lowercasing word tokenizer. Punctuation becomes its own token, with three
/// exceptions: "n't" stays attached to its verb ("didn't" is one token),
/// a '.' between digits stays inside the number, and bracketed placeholders
/// ("[MALE]", "[FEMALE]", "[NEUTRAL]") are kept whole and normalized to
/// their canonical uppercase form. Other apostrophe clitics split off as
/// their own tokens ("jack's" -> "jack", "'s"). Empty input yields no tokens.
Tokens tokenize(std::string_view text);

/// Splits text into sentences at '.', '!' or '?' followed by whitespace.
/// Terminal punctuation stays with its sentence. A bundled abbreviation list
/// (mr., dr., e.g., ...) suppresses false boundaries.
std::vector<std::string> split_sentences(std::string_view text);

std::string join_tokens(const Tokens& tokens);

bool is_placeholder_token(std::string_view token);

}  // namespace storyeval
