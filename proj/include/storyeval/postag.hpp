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

#include <filesystem>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "storyeval/text.hpp"

namespace storyeval {

enum class Pos { Noun, Verb, Adj, Adv, Other };

const char* pos_name(Pos pos);
Pos pos_from_name(std::string_view name);

/// Coarse lexicon tagger. Closed-class words always tag Other; otherwise the
/// lexicon decides, then suffix rules (-ly adverb, -ing/-ed verb,
/// -ous/-ful/-able adjective), then Noun. Tokens without a letter tag Other.
class PosLexicon {
 public:
  /// pos.tsv: token<TAB>tag with tag in {NOUN, VERB, ADJ, ADV, OTHER}.
  static PosLexicon load(const std::filesystem::path& path);
  static PosLexicon from_entries(
      const std::vector<std::pair<std::string, Pos>>& entries);

  Pos tag(std::string_view token) const;
  bool is_closed_class(std::string_view token) const;

 private:
  std::unordered_map<std::string, Pos> lexicon_;
};

std::vector<Pos> pos_tag(const Tokens& tokens, const PosLexicon& lex);

}  // namespace storyeval
