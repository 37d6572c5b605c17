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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storyeval/corpus_io.hpp"
#include "storyeval/frequency.hpp"
#include "storyeval/knowledge.hpp"
#include "storyeval/negation.hpp"
#include "storyeval/postag.hpp"
#include "storyeval/rng.hpp"
#include "storyeval/story.hpp"
#include "storyeval/verbs.hpp"

namespace storyeval {

enum class Technique { Repetition, Substitution, Reordering, Negation };
inline constexpr std::array<Technique, 4> kTechniques = {
    Technique::Repetition, Technique::Substitution, Technique::Reordering,
    Technique::Negation};

const char* technique_name(Technique t);
Technique technique_from_name(std::string_view name);

/// One applied perturbation, with enough provenance to audit or undo it.
/// sentence == -1 means the whole body (reordering); spans index tokens of
/// the sentence as it was when the edit was applied.
struct Edit {
  Technique technique = Technique::Repetition;
  std::string sub_mode;  // "ngram", "sentence", "word", "add", "remove", ""
  int sentence = -1;
  std::pair<int, int> span{0, 0};
  std::string before;
  std::string after;
};

/// (s, r, y) sample: s is the story under judgment, r the original it came
/// from. y == 1 means untouched (s == r, no edits); y == 0 means perturbed.
struct TrainingPair {
  std::string id;
  Story s;
  Story r;
  int y = 1;
  std::vector<Edit> edits;
};

/// Mixing distributions for negative sample construction.
struct MixerConfig {
  /// P(number of techniques = 1..4).
  std::array<double, 4> count_distribution{0.5, 0.2, 0.2, 0.1};
  /// Draw weights for repetition, substitution, reordering, negation.
  std::array<double, 4> technique_weights{0.1, 0.3, 0.4, 0.2};
  double keyword_substitution_rate = 0.15;

  void validate() const;
};

/// Shared read-only context for the techniques.
struct PerturbContext {
  const KnowledgeBase* kb = nullptr;
  const FrequencyTable* freq = nullptr;
  const PosLexicon* pos = nullptr;
  const VerbLexicon* verbs = nullptr;
  /// Sentence-substitution source; entries with the same id as the target
  /// story are ignored.
  std::span<const Story> pool;
};

using TechniqueResult = std::optional<std::pair<Story, std::vector<Edit>>>;

/// Repeats an N-gram (N = 1..4) in place, or repeats a sentence over its
/// successor keeping the sentence count unchanged. Mode is a fair coin;
/// an inapplicable mode falls back to the other one.
TechniqueResult repetition(const Story& story, Rng& rng);

enum class SubstitutionMode { Word, Sentence };

/// Word mode replaces round(rate * keyword tokens), at least one, each by an
/// antonym when the knowledge base has one, else by a frequency-weighted
/// keyword of the same POS, never by itself. Sentence mode swaps one body
/// sentence for a sentence from a different pool story.
TechniqueResult substitute(const Story& story, const PerturbContext& ctx,
                           double keyword_rate, SubstitutionMode mode,
                           Rng& rng);

/// Uniform non-identity permutation of the body sentences.
TechniqueResult reorder(const Story& story, Rng& rng);

/// Picks one eligible sentence uniformly; removes its negation if it has
/// one, otherwise adds one.
TechniqueResult alter_negation(const Story& story, const VerbLexicon& verbs,
                               Rng& rng);

/// Draws a technique count from cfg, then techniques without replacement
/// (remaining weights renormalized), applying each to the evolving story.
/// Inapplicable draws are replaced from the remaining pool. Returns nullopt
/// only when no technique can perturb the story at all.
std::optional<TrainingPair> make_negative(const Story& story,
                                          const PerturbContext& ctx,
                                          const MixerConfig& cfg, Rng& rng);

struct TrainingSet {
  std::vector<TrainingPair> pairs;
  std::vector<std::string> warnings;
};

/// One positive and one negative pair per story, in corpus order. Each
/// story's randomness comes from its own (seed, id) stream, so output is
/// reproducible and independent of batching.
TrainingSet build_training_set(std::span<const Story> corpus,
                               const PerturbContext& ctx,
                               const MixerConfig& cfg, std::uint64_t seed);

void save_pairs(const std::vector<TrainingPair>& pairs,
                const std::filesystem::path& path,
                const std::optional<FileHeader>& header = std::nullopt);
std::vector<TrainingPair> load_pairs(const std::filesystem::path& path);

}  // namespace storyeval
