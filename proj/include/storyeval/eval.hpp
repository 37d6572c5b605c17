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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storyeval/model.hpp"
#include "storyeval/perturb.hpp"
#include "storyeval/stats.hpp"
#include "storyeval/story.hpp"

namespace storyeval {

struct CorrelationReport {
  Corr pearson;
  Corr spearman;
  Corr kendall;
  std::size_t n = 0;
};

/// Correlates metric scores with the mean annotator score, pairing by story
/// id. Every annotated id must be scored; missing ids are reported together.
CorrelationReport evaluate_metric(const std::map<std::string, double>& scores,
                                  std::span<const AnnotatedStory> annotations);

/// 1/(|I-k|+1) where k is the story's annotator-label sum.
double biased_inclusion_probability(int set_index, int label_sum);

/// Quality-drift subset: each story joins set I independently with
/// probability 1/(|I-k|+1). Inclusion depends only on (seed, story id, I).
std::vector<AnnotatedStory> biased_set(
    std::span<const AnnotatedStory> annotations, int set_index,
    std::uint64_t seed);

/// Stories whose flag count for the error type reaches 3 of 7, optionally
/// mixed with the fully reasonable stories (all seven labels 1).
std::vector<AnnotatedStory> error_subset(
    std::span<const AnnotatedStory> annotations, std::string_view error_type,
    bool include_reasonable);

/// Probability a random positive outranks a random negative; ties count 1/2.
double auc(std::span<const double> positive_scores,
           std::span<const double> negative_scores);

/// Everything an ablation run needs. The context pointers must outlive the
/// run; `pool` inside ctx normally aliases `corpus`.
struct AblationInputs {
  std::span<const Story> corpus;
  std::span<const AnnotatedStory> annotations;
  PerturbContext ctx;
  MixerConfig mixer;
  ModelConfig model;
  TrainConfig trainer;
  std::size_t vocab_min_freq = 2;
};

inline constexpr std::array<const char*, 5> kAblationSets = {
    "all", "repe", "cohe", "conf", "chao"};

struct AblationResult {
  std::optional<Technique> removed;
  /// Pearson r per evaluation set: "all" plus each error-type subset
  /// (subsets mixed with the reasonable stories). Sets too small or
  /// degenerate for a correlation are absent.
  std::map<std::string, double> pearson_by_set;
  /// Fractional change versus the nothing-removed row, filled by
  /// ablation_table.
  std::map<std::string, double> relative_change;
};

/// Retrains the scorer with one technique's mixer weight zeroed (remaining
/// weights renormalized) and reports correlation on the evaluation sets.
AblationResult ablation_run(const AblationInputs& inputs,
                            std::optional<Technique> removed,
                            std::uint64_t seed);

/// Full table: the unablated row first, then one row per removed technique,
/// with relative changes against the first row.
std::vector<AblationResult> ablation_table(const AblationInputs& inputs,
                                           std::uint64_t seed);

/// Vocabulary over the perturbed stories of a training set (covers the
/// originals too, since positives are unperturbed).
Vocab vocab_from_pairs(std::span<const TrainingPair> pairs,
                       std::size_t min_freq);

}  // namespace storyeval
