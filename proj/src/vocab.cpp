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

#include "storyeval/vocab.hpp"

#include <algorithm>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {
const char* kReservedNames[Vocab::kReserved] = {"<pad>", "<unk>", "<bos>",
                                                "<eos>"};
}

Vocab::Vocab() : Vocab(std::vector<std::string>{}) {}

Vocab::Vocab(std::vector<std::string> non_reserved_tokens) {
  tokens_.reserve(non_reserved_tokens.size() + kReserved);
  for (const char* name : kReservedNames) tokens_.emplace_back(name);
  for (auto& t : non_reserved_tokens) tokens_.push_back(std::move(t));
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    auto [it, inserted] = index_.emplace(tokens_[i], static_cast<std::int32_t>(i));
    if (!inserted) throw Error("duplicate vocab token: " + tokens_[i]);
  }
}

std::int32_t Vocab::lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(std::int32_t index) const {
  if (index < 0 || index >= size()) throw Error("vocab index out of range");
  return tokens_[static_cast<std::size_t>(index)];
}

bool Vocab::contains(std::string_view token) const {
  return index_.count(std::string(token)) != 0;
}

std::vector<std::int32_t> Vocab::encode(const Tokens& tokens) const {
  std::vector<std::int32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(lookup(t));
  return ids;
}

Vocab build_vocab(std::span<const Story> corpus, std::size_t min_freq) {
  if (min_freq < 1) throw Error("build_vocab: min_freq must be >= 1");
  std::unordered_map<std::string, std::uint64_t> freq;
  auto count = [&](const Tokens& toks) {
    for (const auto& t : toks) ++freq[t];
  };
  for (const auto& story : corpus) {
    count(story.context);
    for (const auto& s : story.body) count(s);
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  kept.reserve(freq.size());
  for (auto& [tok, n] : freq)
    if (n >= min_freq) kept.emplace_back(tok, n);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [tok, n] : kept) tokens.push_back(std::move(tok));
  return Vocab(std::move(tokens));
}

}  // namespace storyeval
