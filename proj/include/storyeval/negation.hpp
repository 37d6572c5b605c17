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

#include <optional>

#include "storyeval/rng.hpp"
#include "storyeval/text.hpp"
#include "storyeval/verbs.hpp"

namespace storyeval {

/// True when the sentence carries "not" or an "...n't" contraction.
bool has_negation(const Tokens& sentence);

/// Negates one verb by rule: be/modal verbs take "not" after them, finite
/// verbs take do-support with the base form ("went" -> "did not go"), and
/// participles/gerunds take "not" before them. The negation site is chosen
/// deterministically: the first be/modal token wins, then the first
/// participle/gerund, then the first finite verb. With probability
/// contraction_prob an "<aux> not" pair collapses to its short form.
/// Returns nullopt when the sentence has no eligible verb or is already
/// negated.
std::optional<Tokens> add_negation(const Tokens& sentence,
                                   const VerbLexicon& verbs, Rng& rng,
                                   double contraction_prob = 0.5);

/// Inverse transform: expands a contraction if present, drops the first
/// negation, and repairs do-support ("did not go" -> "went"). Returns
/// nullopt when the sentence carries no negation.
std::optional<Tokens> remove_negation(const Tokens& sentence,
                                      const VerbLexicon& verbs);

/// Whether add_negation would succeed, without consuming randomness.
bool can_add_negation(const Tokens& sentence, const VerbLexicon& verbs);

}  // namespace storyeval
