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

#include "storyeval/knowledge.hpp"

#include <cctype>
#include <fstream>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {

std::string lower_copy(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_negated_relation(const std::string& relation_lower) {
  return relation_lower == "antonym" || relation_lower == "notdesires" ||
         relation_lower == "notcapableof" || relation_lower == "nothasproperty";
}

bool multi_word(const std::string& s) {
  return s.find(' ') != std::string::npos || s.find('\t') != std::string::npos;
}

}  // namespace

KnowledgeBase KnowledgeBase::from_triples(const std::vector<Triple>& triples,
                                          std::vector<std::string>* warnings) {
  KnowledgeBase kb;
  for (const Triple& raw : triples) {
    Triple t{lower_copy(raw.head), lower_copy(raw.relation), lower_copy(raw.tail)};
    if (t.head.empty() || t.relation.empty() || t.tail.empty())
      throw Error("knowledge triple with empty field");
    if (multi_word(t.head) || multi_word(t.tail)) {
      if (warnings)
        warnings->push_back("dropped multi-word concept: (" + t.head + ", " +
                            t.relation + ", " + t.tail + ")");
      continue;
    }
    auto [it, inserted] = kb.triples_.insert(t);
    if (!inserted) continue;
    kb.keywords_.insert(t.head);
    kb.keywords_.insert(t.tail);
    if (is_negated_relation(t.relation)) {
      kb.antonym_[t.head].insert(t.tail);
      kb.antonym_[t.tail].insert(t.head);
    }
  }
  return kb;
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path,
                                  std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open knowledge base: " + path.string());
  std::vector<Triple> triples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos || t2 + 1 > line.size())
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": expected head<TAB>relation<TAB>tail");
    Triple t{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1),
             line.substr(t2 + 1)};
    if (t.head.empty() || t.relation.empty() || t.tail.empty())
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": empty field in triple");
    triples.push_back(std::move(t));
  }
  return from_triples(triples, warnings);
}

bool KnowledgeBase::is_keyword(std::string_view token) const {
  return keywords_.count(std::string(token)) != 0;
}

const std::set<std::string>& KnowledgeBase::antonyms(
    std::string_view keyword) const {
  static const std::set<std::string> kEmpty;
  auto it = antonym_.find(std::string(keyword));
  return it == antonym_.end() ? kEmpty : it->second;
}

}  // namespace storyeval
