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

#include "storyeval/negation.hpp"

namespace storyeval {

namespace {

bool is_contraction(const std::string& token) {
  return token.size() > 3 && token.ends_with("n't");
}

}  // namespace

bool has_negation(const Tokens& sentence) {
  for (const auto& t : sentence)
    if (t == "not" || t == "n't" || is_contraction(t)) return true;
  return false;
}

namespace {

// Site selection: auxiliaries first so perfect/progressive groups negate
// naturally ("had gone" -> "had not gone" via the participle, not
// "did not have gone" via "had"); then participles/gerunds; then finite
// verbs, which take do-support.
std::optional<std::pair<std::size_t, VerbClass>> find_negation_site(
    const Tokens& sentence, const VerbLexicon& verbs) {
  for (std::size_t i = 0; i < sentence.size(); ++i)
    if (verbs.is_be(sentence[i]) || verbs.is_modal(sentence[i]))
      return std::pair{i, verbs.classify(sentence[i])};
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    VerbClass c = verbs.classify(sentence[i]);
    if (c == VerbClass::PastPart || c == VerbClass::Gerund)
      return std::pair{i, c};
  }
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    VerbClass c = verbs.classify(sentence[i]);
    if (c == VerbClass::Base || c == VerbClass::ThirdSg || c == VerbClass::Past)
      return std::pair{i, c};
  }
  return std::nullopt;
}

}  // namespace

bool can_add_negation(const Tokens& sentence, const VerbLexicon& verbs) {
  return !has_negation(sentence) &&
         find_negation_site(sentence, verbs).has_value();
}

std::optional<Tokens> add_negation(const Tokens& sentence,
                                   const VerbLexicon& verbs, Rng& rng,
                                   double contraction_prob) {
  if (has_negation(sentence)) return std::nullopt;
  auto found = find_negation_site(sentence, verbs);
  if (!found) return std::nullopt;
  auto [site, site_class] = *found;

  Tokens out;
  out.reserve(sentence.size() + 2);
  out.insert(out.end(), sentence.begin(), sentence.begin() + site);
  std::size_t aux_index = out.size();  // position of the token "not" follows
  bool aux_followed_by_not = true;
  switch (site_class) {
    case VerbClass::Be:
    case VerbClass::Modal:
      out.push_back(sentence[site]);
      out.push_back("not");
      break;
    case VerbClass::Base:
    case VerbClass::ThirdSg:
    case VerbClass::Past: {
      const VerbRow* row = verbs.row_for(sentence[site]);
      const char* support = site_class == VerbClass::ThirdSg ? "does"
                            : site_class == VerbClass::Past  ? "did"
                                                             : "do";
      out.push_back(support);
      out.push_back("not");
      out.push_back(row ? row->base : std::string(sentence[site]));
      break;
    }
    case VerbClass::PastPart:
    case VerbClass::Gerund:
      out.push_back("not");
      out.push_back(sentence[site]);
      aux_followed_by_not = false;
      break;
    default:
      return std::nullopt;
  }
  out.insert(out.end(), sentence.begin() + site + 1, sentence.end());

  if (aux_followed_by_not && rng.bernoulli(contraction_prob)) {
    if (auto shortform = verbs.contraction(out[aux_index])) {
      out[aux_index] = *shortform;
      out.erase(out.begin() + aux_index + 1);
    }
  }
  return out;
}

std::optional<Tokens> remove_negation(const Tokens& sentence,
                                      const VerbLexicon& verbs) {
  if (!has_negation(sentence)) return std::nullopt;

  // Expand contractions so a single "not" removal covers both spellings.
  Tokens expanded;
  expanded.reserve(sentence.size() + 1);
  for (const auto& t : sentence) {
    if (t == "n't") {
      expanded.push_back("not");
    } else if (is_contraction(t)) {
      auto pair = verbs.expand_contraction(t);
      expanded.insert(expanded.end(), pair->begin(), pair->end());
    } else {
      expanded.push_back(t);
    }
  }

  std::size_t not_pos = 0;
  while (not_pos < expanded.size() && expanded[not_pos] != "not") ++not_pos;

  Tokens out;
  out.reserve(expanded.size());
  // "do/does/did not <base>" collapses back onto the inflected verb.
  if (not_pos > 0 && not_pos + 1 < expanded.size()) {
    const std::string& support = expanded[not_pos - 1];
    VerbClass slot = VerbClass::NotVerb;
    if (support == "do") slot = VerbClass::Base;
    if (support == "does") slot = VerbClass::ThirdSg;
    if (support == "did") slot = VerbClass::Past;
    const std::string& next = expanded[not_pos + 1];
    if (slot != VerbClass::NotVerb && verbs.classify(next) == VerbClass::Base) {
      out.insert(out.end(), expanded.begin(), expanded.begin() + not_pos - 1);
      out.push_back(verbs.inflect(next, slot));
      out.insert(out.end(), expanded.begin() + not_pos + 2, expanded.end());
      return out;
    }
  }
  out.insert(out.end(), expanded.begin(), expanded.begin() + not_pos);
  out.insert(out.end(), expanded.begin() + not_pos + 1, expanded.end());
  return out;
}

}  // namespace storyeval
