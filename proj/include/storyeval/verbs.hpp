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
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "storyeval/text.hpp"

namespace storyeval {

enum class VerbClass { Be, Modal, Base, ThirdSg, Past, PastPart, Gerund, NotVerb };

const char* verb_class_name(VerbClass c);

struct VerbRow {
  std::string base;
  std::string third_sg;
  std::string past;
  std::string past_part;
  std::string gerund;

  const std::string& form(VerbClass slot) const;
};

/// Inflection table plus the fixed be/modal/contraction sets used by the
/// negation rules. Reverse lookup of an ambiguous surface form prefers the
/// earlier slot in (base, 3rd-singular, past, past-participle, gerund); a
/// form claimed by two verbs goes to the verb loaded first. Both choices are
/// deterministic rather than clever.
class VerbLexicon {
 public:
  /// verbs.tsv: base<TAB>third_sg<TAB>past<TAB>past_participle<TAB>gerund.
  static VerbLexicon load(const std::filesystem::path& path);
  static VerbLexicon from_rows(std::vector<VerbRow> rows);

  VerbClass classify(std::string_view token) const;
  /// Row backing a surface form; nullptr for be/modal/unknown tokens.
  const VerbRow* row_for(std::string_view token) const;

  /// Form of a base verb in the given slot. Falls back to the regular
  /// -s/-ed/-ing rules (with e-drop and consonant doubling) for verbs
  /// missing from the table.
  std::string inflect(std::string_view base, VerbClass slot) const;

  static std::string regular_inflect(std::string_view base, VerbClass slot);

  /// "was" + "not" -> "wasn't" when the short form exists.
  std::optional<std::string> contraction(std::string_view auxiliary) const;
  /// "wasn't" -> {"was", "not"}; generic "xn't" strips to {"x", "not"}.
  std::optional<Tokens> expand_contraction(std::string_view token) const;

  bool is_be(std::string_view token) const;
  bool is_modal(std::string_view token) const;

  std::size_t size() const { return rows_.size(); }
  const std::vector<VerbRow>& rows() const { return rows_; }

 private:
  std::vector<VerbRow> rows_;
  std::unordered_map<std::string, std::pair<std::size_t, VerbClass>> reverse_;
};

}  // namespace storyeval
