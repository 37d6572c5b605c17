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

#include "storyeval/frequency.hpp"

#include <algorithm>

#include "storyeval/error.hpp"

namespace storyeval {

void FrequencyTable::add(const std::string& keyword, Pos pos,
                         std::uint64_t count) {
  if (count == 0) throw Error("FrequencyTable::add: zero count");
  auto [it, inserted] = counts_.try_emplace(keyword, pos, count);
  if (!inserted) it->second.second += count;
  finalized_ = false;
}

void FrequencyTable::finalize() {
  buckets_.clear();
  for (const auto& [keyword, entry] : counts_) {
    Bucket& b = buckets_[entry.first];
    b.total += entry.second;
    b.cumulative.emplace_back(keyword, b.total);
  }
  finalized_ = true;
}

std::uint64_t FrequencyTable::count(std::string_view keyword) const {
  auto it = counts_.find(std::string(keyword));
  return it == counts_.end() ? 0 : it->second.second;
}

std::uint64_t FrequencyTable::pos_total(Pos pos) const {
  auto it = buckets_.find(pos);
  return it == buckets_.end() ? 0 : it->second.total;
}

std::optional<std::string> FrequencyTable::sample(Pos pos, Rng& rng) const {
  if (!finalized_) throw Error("FrequencyTable::sample before finalize()");
  auto it = buckets_.find(pos);
  if (it == buckets_.end() || it->second.total == 0) return std::nullopt;
  const Bucket& b = it->second;
  std::uint64_t u = rng.uniform_u64(b.total);
  auto pick = std::upper_bound(
      b.cumulative.begin(), b.cumulative.end(), u,
      [](std::uint64_t value, const auto& entry) { return value < entry.second; });
  return pick->first;
}

FrequencyTable mention_frequency(std::span<const Story> corpus,
                                 const KnowledgeBase& kb,
                                 const PosLexicon& lex) {
  FrequencyTable table;
  auto scan = [&](const Tokens& toks) {
    for (const auto& t : toks)
      if (kb.is_keyword(t)) table.add(t, lex.tag(t), 1);
  };
  for (const auto& story : corpus) {
    scan(story.context);
    for (const auto& s : story.body) scan(s);
  }
  table.finalize();
  return table;
}

}  // namespace storyeval
