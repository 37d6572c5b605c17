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

#include "storyeval/postag.hpp"

#include <cctype>
#include <fstream>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {

const std::unordered_set<std::string>& closed_class_words() {
  static const std::unordered_set<std::string> words = {
      // determiners, pronouns
      "the", "a", "an", "this", "that", "these", "those", "some", "any",
      "no", "every", "each", "either", "neither", "both", "all", "few",
      "many", "much", "i", "you", "he", "she", "it", "we", "they", "me",
      "him", "her", "us", "them", "my", "your", "his", "its", "our",
      "their", "mine", "yours", "hers", "ours", "theirs", "myself",
      "yourself", "himself", "herself", "itself", "ourselves", "themselves",
      "who", "whom", "whose", "which", "what", "someone", "anyone",
      "everyone", "nobody", "something", "anything", "everything", "nothing",
      // prepositions, particles
      "in", "on", "at", "by", "for", "with", "about", "against", "between",
      "into", "through", "during", "before", "after", "above", "below",
      "to", "from", "up", "down", "out", "off", "over", "under", "of",
      "near", "around", "among", "along", "across", "behind", "beside",
      "inside", "outside", "toward", "towards", "upon", "within", "without",
      // conjunctions, complementizers
      "and", "or", "but", "nor", "so", "yet", "if", "because", "although",
      "though", "while", "when", "whenever", "where", "wherever", "since",
      "until", "unless", "than", "whether", "as",
      // auxiliaries, negation, infinitive marker
      "am", "is", "are", "was", "were", "be", "been", "being", "do", "does",
      "did", "have", "has", "had", "will", "would", "shall", "should",
      "can", "could", "may", "might", "must", "not", "there", "here",
      "then", "also", "too", "very", "just", "only", "even", "again",
      "once", "n't"};
  return words;
}

bool has_letter(std::string_view token) {
  for (char c : token)
    if (std::isalpha(static_cast<unsigned char>(c)) ||
        static_cast<unsigned char>(c) >= 0x80)
      return true;
  return false;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

const char* pos_name(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

Pos pos_from_name(std::string_view name) {
  if (name == "NOUN") return Pos::Noun;
  if (name == "VERB") return Pos::Verb;
  if (name == "ADJ") return Pos::Adj;
  if (name == "ADV") return Pos::Adv;
  if (name == "OTHER") return Pos::Other;
  throw Error("unknown POS tag: " + std::string(name));
}

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open POS lexicon: " + path.string());
  PosLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": expected token<TAB>tag");
    lex.lexicon_[line.substr(0, tab)] = pos_from_name(line.substr(tab + 1));
  }
  return lex;
}

PosLexicon PosLexicon::from_entries(
    const std::vector<std::pair<std::string, Pos>>& entries) {
  PosLexicon lex;
  for (const auto& [tok, pos] : entries) lex.lexicon_[tok] = pos;
  return lex;
}

bool PosLexicon::is_closed_class(std::string_view token) const {
  return closed_class_words().count(std::string(token)) != 0;
}

Pos PosLexicon::tag(std::string_view token) const {
  std::string key(token);
  if (closed_class_words().count(key)) return Pos::Other;
  if (!has_letter(key)) return Pos::Other;
  if (auto it = lexicon_.find(key); it != lexicon_.end()) return it->second;
  if (ends_with(key, "ly")) return Pos::Adv;
  if (ends_with(key, "ing") || ends_with(key, "ed")) return Pos::Verb;
  if (ends_with(key, "ous") || ends_with(key, "ful") || ends_with(key, "able"))
    return Pos::Adj;
  return Pos::Noun;
}

std::vector<Pos> pos_tag(const Tokens& tokens, const PosLexicon& lex) {
  std::vector<Pos> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) tags.push_back(lex.tag(t));
  return tags;
}

}  // namespace storyeval
