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

#include "storyeval/eval.hpp"

#include <algorithm>
#include <cmath>

#include "storyeval/error.hpp"
#include "storyeval/rng.hpp"

namespace storyeval {

CorrelationReport evaluate_metric(const std::map<std::string, double>& scores,
                                  std::span<const AnnotatedStory> annotations) {
  std::vector<std::string> missing;
  std::vector<double> metric, human;
  metric.reserve(annotations.size());
  human.reserve(annotations.size());
  for (const auto& a : annotations) {
    auto it = scores.find(a.story.id);
    if (it == scores.end()) {
      missing.push_back(a.story.id);
      continue;
    }
    metric.push_back(it->second);
    human.push_back(a.mean_label());
  }
  if (!missing.empty()) {
    std::string what = "missing metric scores for ids:";
    for (const auto& id : missing) what += " " + id;
    throw Error(what);
  }
  CorrelationReport report;
  report.n = metric.size();
  report.pearson = pearson(metric, human);
  report.spearman = spearman(metric, human);
  report.kendall = kendall(metric, human);
  return report;
}

double biased_inclusion_probability(int set_index, int label_sum) {
  if (set_index < 1 || set_index > 8)
    throw Error("biased set index must be in 1..8");
  if (label_sum < 0 || label_sum > 7) throw Error("label sum must be in 0..7");
  return 1.0 / (std::abs(set_index - label_sum) + 1);
}

std::vector<AnnotatedStory> biased_set(
    std::span<const AnnotatedStory> annotations, int set_index,
    std::uint64_t seed) {
  if (set_index < 1 || set_index > 8)
    throw Error("biased set index must be in 1..8");
  std::vector<AnnotatedStory> out;
  for (const auto& a : annotations) {
    double p = biased_inclusion_probability(set_index, a.label_sum());
    Rng rng(derive_seed(seed, "bias/" + std::to_string(set_index) + "/" +
                                  a.story.id));
    if (rng.uniform() < p) out.push_back(a);
  }
  return out;
}

std::vector<AnnotatedStory> error_subset(
    std::span<const AnnotatedStory> annotations, std::string_view error_type,
    bool include_reasonable) {
  if (!is_error_type(error_type))
    throw Error("unknown error type: " + std::string(error_type));
  std::vector<AnnotatedStory> out;
  for (const auto& a : annotations) {
    int flags = 0;
    for (const auto& set : a.error_flags)
      flags += set.count(std::string(error_type)) ? 1 : 0;
    bool reasonable = a.label_sum() == 7;
    if (flags >= 3 || (include_reasonable && reasonable)) out.push_back(a);
  }
  return out;
}

double auc(std::span<const double> positive_scores,
           std::span<const double> negative_scores) {
  if (positive_scores.empty() || negative_scores.empty())
    throw Error("auc: both score sets must be non-empty");
  std::vector<double> all(positive_scores.begin(), positive_scores.end());
  all.insert(all.end(), negative_scores.begin(), negative_scores.end());
  std::vector<double> ranks = average_ranks(all);
  double rank_sum = 0.0;
  const std::size_t np = positive_scores.size();
  for (std::size_t i = 0; i < np; ++i) rank_sum += ranks[i];
  double u = rank_sum - static_cast<double>(np) * (np + 1) / 2.0;
  return u / (static_cast<double>(np) * negative_scores.size());
}

Vocab vocab_from_pairs(std::span<const TrainingPair> pairs,
                       std::size_t min_freq) {
  std::vector<Story> stories;
  stories.reserve(pairs.size());
  for (const auto& p : pairs) stories.push_back(p.s);
  return build_vocab(stories, min_freq);
}

AblationResult ablation_run(const AblationInputs& inputs,
                            std::optional<Technique> removed,
                            std::uint64_t seed) {
  MixerConfig mixer = inputs.mixer;
  if (removed) {
    double& w = mixer.technique_weights[static_cast<std::size_t>(*removed)];
    double rest = 0.0;
    for (double x : mixer.technique_weights) rest += x;
    rest -= w;
    if (rest <= 0.0) throw Error("ablation: no technique weight left");
    w = 0.0;
    for (double& x : mixer.technique_weights) x /= rest;
  }

  TrainingSet ts = build_training_set(inputs.corpus, inputs.ctx, mixer, seed);
  Vocab vocab = vocab_from_pairs(ts.pairs, inputs.vocab_min_freq);
  TrainConfig tcfg = inputs.trainer;
  tcfg.seed = derive_seed(seed, "train");
  TrainResult trained = train(ts.pairs, vocab, inputs.model, tcfg);

  std::map<std::string, double> scores;
  for (const auto& a : inputs.annotations)
    scores[a.story.id] = score_story(trained.model, a.story);

  AblationResult result;
  result.removed = removed;
  result.pearson_by_set["all"] =
      evaluate_metric(scores, inputs.annotations).pearson.coefficient;
  for (const char* type : kAblationSets) {
    if (std::string_view(type) == "all") continue;
    auto subset = error_subset(inputs.annotations, type, true);
    if (subset.size() < 3) continue;
    try {
      result.pearson_by_set[type] =
          evaluate_metric(scores, subset).pearson.coefficient;
    } catch (const Error&) {
      // Degenerate subset (constant scores); leave the cell empty.
    }
  }
  return result;
}

std::vector<AblationResult> ablation_table(const AblationInputs& inputs,
                                           std::uint64_t seed) {
  std::vector<AblationResult> table;
  table.reserve(1 + kTechniques.size());
  table.push_back(ablation_run(inputs, std::nullopt, seed));
  const AblationResult full = table.front();
  for (Technique t : kTechniques) {
    AblationResult row = ablation_run(inputs, t, seed);
    for (const auto& [set, r] : row.pearson_by_set) {
      auto it = full.pearson_by_set.find(set);
      if (it != full.pearson_by_set.end() && it->second != 0.0)
        row.relative_change[set] = (r - it->second) / std::fabs(it->second);
    }
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace storyeval
