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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storyeval/knowledge.hpp"
#include "storyeval/postag.hpp"
#include "storyeval/rng.hpp"
#include "storyeval/story.hpp"

namespace storyeval {

/// Corpus mention counts for knowledge-base keywords, bucketed by the
/// keyword's POS tag, with cumulative weights for proportional sampling.
class FrequencyTable {
 public:
  void add(const std::string& keyword, Pos pos, std::uint64_t count);
  /// Call once after all counts are added; builds the sampling structures.
  void finalize();

  std::uint64_t count(std::string_view keyword) const;
  std::uint64_t pos_total(Pos pos) const;
  std::size_t keyword_count() const { return counts_.size(); }

  /// Keyword drawn with probability count/total within the POS bucket.
  /// Empty bucket yields nullopt so the caller can fall back.
  std::optional<std::string> sample(Pos pos, Rng& rng) const;

 private:
  struct Bucket {
    std::vector<std::pair<std::string, std::uint64_t>> cumulative;
    std::uint64_t total = 0;
  };
  // Ordered map keeps bucket construction independent of hash order.
  std::map<std::string, std::pair<Pos, std::uint64_t>> counts_;
  std::map<Pos, Bucket> buckets_;
  bool finalized_ = false;
};

/// Counts every corpus token that is a KB keyword. Each keyword is bucketed
/// by its out-of-context tag, which is stable for this lexicon tagger.
FrequencyTable mention_frequency(std::span<const Story> corpus,
                                 const KnowledgeBase& kb,
                                 const PosLexicon& lex);

}  // namespace storyeval
