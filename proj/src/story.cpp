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

#include "storyeval/story.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>

#include "storyeval/error.hpp"

namespace storyeval {

std::size_t Story::body_token_count() const {
  std::size_t n = 0;
  for (const auto& s : body) n += s.size();
  return n;
}

Tokens Story::flatten() const {
  Tokens out = context;
  for (const auto& s : body) out.insert(out.end(), s.begin(), s.end());
  return out;
}

bool is_error_type(std::string_view s) {
  return std::find(kErrorTypes.begin(), kErrorTypes.end(), s) !=
         kErrorTypes.end();
}

int AnnotatedStory::label_sum() const {
  return std::accumulate(labels.begin(), labels.end(), 0);
}

namespace {
std::string lower_copy(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}
}  // namespace

NameLexicon NameLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open name lexicon: " + path.string());
  NameLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab + 1 >= line.size())
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": expected name<TAB>gender");
    std::string name = lower_copy(std::string_view(line).substr(0, tab));
    char g = static_cast<char>(std::toupper(static_cast<unsigned char>(line[tab + 1])));
    if (g != 'M' && g != 'F' && g != 'N')
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": gender must be M, F or N");
    if (name.find(' ') != std::string::npos)
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": names must be single tokens");
    lex.gender_[name] = g;
  }
  return lex;
}

NameLexicon NameLexicon::from_entries(
    const std::vector<std::pair<std::string, char>>& entries) {
  NameLexicon lex;
  for (const auto& [name, g] : entries) lex.gender_[lower_copy(name)] = g;
  return lex;
}

char NameLexicon::lookup(std::string_view token) const {
  auto it = gender_.find(lower_copy(token));
  return it == gender_.end() ? 0 : it->second;
}

namespace {
const char* placeholder_for(char gender) {
  switch (gender) {
    case 'M': return "[MALE]";
    case 'F': return "[FEMALE]";
    default: return "[NEUTRAL]";
  }
}

Tokens delexicalize_tokens(const Tokens& tokens, const NameLexicon& names) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    char g = names.lookup(tok);
    out.push_back(g ? placeholder_for(g) : tok);
  }
  return out;
}
}  // namespace

Story delexicalize(const Story& story, const NameLexicon& names) {
  Story out;
  out.id = story.id;
  out.context = delexicalize_tokens(story.context, names);
  out.body.reserve(story.body.size());
  for (const auto& s : story.body) out.body.push_back(delexicalize_tokens(s, names));
  return out;
}

Story truncate_words(const Story& story, std::size_t max_words) {
  if (max_words == 0) throw Error("truncate_words: max_words must be >= 1");
  Story out;
  out.id = story.id;
  out.context = story.context;
  std::size_t total = 0;
  for (const auto& s : story.body) {
    if (!out.body.empty() && total + s.size() > max_words) break;
    out.body.push_back(s);
    total += s.size();
    if (total > max_words) break;  // only possible for the first sentence
  }
  return out;
}

}  // namespace storyeval
