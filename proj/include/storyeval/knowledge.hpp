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
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace storyeval {

struct Triple {
  std::string head;
  std::string relation;
  std::string tail;
  auto operator<=>(const Triple&) const = default;
};

/// Commonsense triple store. Keywords are all heads and tails; the antonym
/// map connects keywords joined, in either direction, by one of the negated
/// relations (antonym, notdesires, notcapableof, nothasproperty).
///
/// Multi-word concepts are dropped at load time with a warning; keyword
/// matching is single-token only.
class KnowledgeBase {
 public:
  static KnowledgeBase load(const std::filesystem::path& path,
                            std::vector<std::string>* warnings = nullptr);
  static KnowledgeBase from_triples(const std::vector<Triple>& triples,
                                    std::vector<std::string>* warnings = nullptr);

  bool is_keyword(std::string_view token) const;
  /// Negated-relation neighbors of the keyword; empty set when none.
  const std::set<std::string>& antonyms(std::string_view keyword) const;

  std::size_t triple_count() const { return triples_.size(); }
  std::size_t keyword_count() const { return keywords_.size(); }
  const std::unordered_set<std::string>& keywords() const { return keywords_; }

 private:
  std::set<Triple> triples_;
  std::unordered_set<std::string> keywords_;
  std::unordered_map<std::string, std::set<std::string>> antonym_;
};

}  // namespace storyeval
