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

#include <array>
#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "storyeval/text.hpp"

namespace storyeval {

/// A leading context sentence plus an ordered body of tokenized sentences.
/// Placeholders like [MALE] are ordinary tokens.
struct Story {
  std::string id;
  Tokens context;
  std::vector<Tokens> body;

  bool operator==(const Story&) const = default;

  std::size_t body_token_count() const;
  /// Context tokens followed by all body tokens, in order.
  Tokens flatten() const;
};

inline constexpr std::array<const char*, 5> kErrorTypes = {
    "repe", "cohe", "conf", "chao", "others"};

bool is_error_type(std::string_view s);

/// A generated story with seven binary annotator labels and each annotator's
/// error-type flags. A flag set is non-empty exactly when that annotator
/// labeled the story 0.
struct AnnotatedStory {
  Story story;
  std::array<int, 7> labels{};
  std::array<std::set<std::string>, 7> error_flags{};

  int label_sum() const;
  double mean_label() const { return label_sum() / 7.0; }
};

/// Single-token first-name lookup; M, F or N. Case-insensitive keys.
class NameLexicon {
 public:
  static NameLexicon load(const std::filesystem::path& path);
  static NameLexicon from_entries(
      const std::vector<std::pair<std::string, char>>& entries);

  /// Returns 'M', 'F', 'N', or 0 when the token is not a known name.
  char lookup(std::string_view token) const;
  std::size_t size() const { return gender_.size(); }

 private:
  std::unordered_map<std::string, char> gender_;
};

/// Replaces every name token with its gender placeholder. Idempotent.
Story delexicalize(const Story& story, const NameLexicon& names);

/// Longest prefix of whole body sentences totalling at most max_words tokens.
/// If the first sentence alone exceeds the budget it is returned by itself.
/// The leading context is kept and not counted.
Story truncate_words(const Story& story, std::size_t max_words);

}  // namespace storyeval
