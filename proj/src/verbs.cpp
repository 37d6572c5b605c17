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

#include "storyeval/verbs.hpp"

#include <array>
#include <fstream>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {

const std::unordered_set<std::string>& be_forms() {
  static const std::unordered_set<std::string> s = {
      "am", "is", "are", "was", "were", "be", "been", "being"};
  return s;
}

const std::unordered_set<std::string>& modal_forms() {
  static const std::unordered_set<std::string> s = {
      "will", "would", "shall", "should", "can", "could", "may", "might",
      "must"};
  return s;
}

const std::unordered_map<std::string, std::string>& contraction_table() {
  static const std::unordered_map<std::string, std::string> s = {
      {"is", "isn't"},       {"are", "aren't"},     {"was", "wasn't"},
      {"were", "weren't"},   {"will", "won't"},     {"would", "wouldn't"},
      {"shall", "shan't"},   {"should", "shouldn't"}, {"can", "can't"},
      {"could", "couldn't"}, {"must", "mustn't"},   {"do", "don't"},
      {"does", "doesn't"},   {"did", "didn't"},     {"has", "hasn't"},
      {"have", "haven't"},   {"had", "hadn't"}};
  return s;
}

const std::unordered_map<std::string, std::string>& expansion_table() {
  static const std::unordered_map<std::string, std::string> s = [] {
    std::unordered_map<std::string, std::string> inv;
    for (const auto& [aux, contracted] : contraction_table())
      inv.emplace(contracted, aux);
    return inv;
  }();
  return s;
}

constexpr std::array<VerbClass, 5> kSlotOrder = {
    VerbClass::Base, VerbClass::ThirdSg, VerbClass::Past, VerbClass::PastPart,
    VerbClass::Gerund};

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// Final consonant-vowel-consonant shape calls for doubling (stop -> stopped),
// except when the last consonant is w, x or y.
bool doubles_final_consonant(std::string_view base) {
  if (base.size() < 3) return base.size() == 2 && is_vowel(base[0]) && !is_vowel(base[1]);
  char a = base[base.size() - 3];
  char b = base[base.size() - 2];
  char c = base[base.size() - 1];
  if (is_vowel(c) || c == 'w' || c == 'x' || c == 'y') return false;
  return is_vowel(b) && !is_vowel(a);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

const char* verb_class_name(VerbClass c) {
  switch (c) {
    case VerbClass::Be: return "BE";
    case VerbClass::Modal: return "MODAL";
    case VerbClass::Base: return "BASE";
    case VerbClass::ThirdSg: return "THIRD_SG";
    case VerbClass::Past: return "PAST";
    case VerbClass::PastPart: return "PAST_PART";
    case VerbClass::Gerund: return "GERUND";
    case VerbClass::NotVerb: return "NOT_VERB";
  }
  return "NOT_VERB";
}

const std::string& VerbRow::form(VerbClass slot) const {
  switch (slot) {
    case VerbClass::Base: return base;
    case VerbClass::ThirdSg: return third_sg;
    case VerbClass::Past: return past;
    case VerbClass::PastPart: return past_part;
    case VerbClass::Gerund: return gerund;
    default: throw Error("VerbRow::form: not an inflection slot");
  }
}

VerbLexicon VerbLexicon::from_rows(std::vector<VerbRow> rows) {
  VerbLexicon lex;
  lex.rows_ = std::move(rows);
  for (std::size_t i = 0; i < lex.rows_.size(); ++i) {
    const VerbRow& row = lex.rows_[i];
    for (VerbClass slot : kSlotOrder) {
      const std::string& form = row.form(slot);
      if (form.empty()) throw Error("verb row with empty form: " + row.base);
      // First slot in preference order wins; earlier rows win over later.
      lex.reverse_.try_emplace(form, i, slot);
    }
  }
  return lex;
}

VerbLexicon VerbLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open verb lexicon: " + path.string());
  std::vector<VerbRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<std::string, 5> fields;
    std::size_t start = 0;
    for (std::size_t f = 0; f < 5; ++f) {
      auto tab = line.find('\t', start);
      if (f < 4 && tab == std::string::npos)
        throw Error(path.string() + ":" + std::to_string(lineno) +
                    ": expected 5 tab-separated verb forms");
      fields[f] = line.substr(start, tab == std::string::npos
                                         ? std::string::npos
                                         : tab - start);
      start = tab + 1;
    }
    rows.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
  }
  return from_rows(std::move(rows));
}

bool VerbLexicon::is_be(std::string_view token) const {
  return be_forms().count(std::string(token)) != 0;
}

bool VerbLexicon::is_modal(std::string_view token) const {
  return modal_forms().count(std::string(token)) != 0;
}

VerbClass VerbLexicon::classify(std::string_view token) const {
  std::string key(token);
  if (be_forms().count(key)) return VerbClass::Be;
  if (modal_forms().count(key)) return VerbClass::Modal;
  auto it = reverse_.find(key);
  return it == reverse_.end() ? VerbClass::NotVerb : it->second.second;
}

const VerbRow* VerbLexicon::row_for(std::string_view token) const {
  auto it = reverse_.find(std::string(token));
  return it == reverse_.end() ? nullptr : &rows_[it->second.first];
}

std::string VerbLexicon::regular_inflect(std::string_view base, VerbClass slot) {
  std::string b(base);
  switch (slot) {
    case VerbClass::Base:
      return b;
    case VerbClass::ThirdSg:
      if (ends_with(b, "s") || ends_with(b, "x") || ends_with(b, "z") ||
          ends_with(b, "ch") || ends_with(b, "sh") || ends_with(b, "o"))
        return b + "es";
      if (b.size() >= 2 && b.back() == 'y' && !is_vowel(b[b.size() - 2]))
        return b.substr(0, b.size() - 1) + "ies";
      return b + "s";
    case VerbClass::Past:
    case VerbClass::PastPart:
      if (ends_with(b, "e")) return b + "d";
      if (b.size() >= 2 && b.back() == 'y' && !is_vowel(b[b.size() - 2]))
        return b.substr(0, b.size() - 1) + "ied";
      if (doubles_final_consonant(b)) return b + b.back() + "ed";
      return b + "ed";
    case VerbClass::Gerund:
      if (ends_with(b, "ie")) return b.substr(0, b.size() - 2) + "ying";
      if (b.size() >= 2 && b.back() == 'e' && !is_vowel(b[b.size() - 2]))
        return b.substr(0, b.size() - 1) + "ing";
      if (doubles_final_consonant(b)) return b + b.back() + "ing";
      return b + "ing";
    default:
      throw Error("regular_inflect: not an inflection slot");
  }
}

std::string VerbLexicon::inflect(std::string_view base, VerbClass slot) const {
  auto it = reverse_.find(std::string(base));
  if (it != reverse_.end() && it->second.second == VerbClass::Base)
    return rows_[it->second.first].form(slot);
  return regular_inflect(base, slot);
}

std::optional<std::string> VerbLexicon::contraction(
    std::string_view auxiliary) const {
  auto it = contraction_table().find(std::string(auxiliary));
  if (it == contraction_table().end()) return std::nullopt;
  return it->second;
}

std::optional<Tokens> VerbLexicon::expand_contraction(
    std::string_view token) const {
  std::string key(token);
  if (auto it = expansion_table().find(key); it != expansion_table().end())
    return Tokens{it->second, "not"};
  if (ends_with(key, "n't") && key.size() > 3)
    return Tokens{key.substr(0, key.size() - 3), "not"};
  return std::nullopt;
}

}  // namespace storyeval
