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
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "storyeval/story.hpp"

namespace storyeval {

/// Token index with four fixed reserved entries. Non-reserved tokens are
/// ordered by descending corpus frequency, ties broken lexicographically.
class Vocab {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;
  static constexpr std::int32_t kBos = 2;
  static constexpr std::int32_t kEos = 3;
  static constexpr std::int32_t kReserved = 4;

  Vocab();
  explicit Vocab(std::vector<std::string> non_reserved_tokens);

  std::int32_t lookup(std::string_view token) const;  // kUnk when absent
  const std::string& token(std::int32_t index) const;
  std::int32_t size() const { return static_cast<std::int32_t>(tokens_.size()); }
  bool contains(std::string_view token) const;

  /// Index order including the reserved entries.
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<std::int32_t> encode(const Tokens& tokens) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> index_;
};

Vocab build_vocab(std::span<const Story> corpus, std::size_t min_freq);

}  // namespace storyeval
