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
#include <map>
#include <string>
#include <vector>

#include "storyeval/eval.hpp"
#include "storyeval/frequency.hpp"
#include "storyeval/knowledge.hpp"
#include "storyeval/perturb.hpp"
#include "storyeval/postag.hpp"
#include "storyeval/story.hpp"
#include "storyeval/verbs.hpp"

namespace storyeval::testsupport {

/// Templated six-topic story world: ~300 distinct tokens, 30 regular verbs,
/// 50 cross-topic adjective antonym pairs. Stories are five body sentences
/// with ordinal discourse markers, so every perturbation technique leaves a
/// learnable trace. Fully determined by (story_count, seed).
struct SyntheticWorld {
  std::vector<Story> stories;
  KnowledgeBase kb;
  VerbLexicon verbs;
  PosLexicon pos;
  FrequencyTable freq;

  std::vector<Triple> triples;
  std::vector<VerbRow> verb_rows;
  std::vector<std::pair<std::string, Pos>> pos_entries;

  PerturbContext context() const {
    return PerturbContext{&kb, &freq, &pos, &verbs, stories};
  }

  /// corpus.jsonl, kb.tsv, verbs.tsv, pos.tsv under dir.
  void write_files(const std::filesystem::path& dir) const;
};

SyntheticWorld make_world(std::size_t story_count, std::uint64_t seed);

Story make_story(const SyntheticWorld& world, const std::string& id, Rng& rng);

/// Negative built with exactly one forced technique.
Story perturb_single(const SyntheticWorld& world, const Story& story,
                     Technique technique, std::uint64_t seed);

/// Synthetic annotations: each story gets a quality level k in 0..7, is
/// perturbed harder the lower k is (k == 7 stays clean), and receives k
/// positive labels plus technique-derived error flags from the annotators
/// that labeled it 0. `truth` (optional) records 1 for clean, 0 for
/// perturbed, keyed by story id.
std::vector<AnnotatedStory> make_annotations(const SyntheticWorld& world,
                                             std::size_t count,
                                             std::uint64_t seed,
                                             std::map<std::string, int>* truth);

}  // namespace storyeval::testsupport
