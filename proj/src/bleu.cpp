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

#include "storyeval/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "storyeval/error.hpp"

namespace storyeval {

namespace {

constexpr double kSmoothing = 1e-9;

std::unordered_map<std::string, int> ngram_counts(const Tokens& tokens,
                                                  std::size_t n) {
  std::unordered_map<std::string, int> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) {
      if (k) key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double sentence_bleu(const Tokens& candidate, const Tokens& reference) {
  if (reference.empty()) throw Error("sentence_bleu: empty reference");
  if (candidate.empty()) return 0.0;

  const std::size_t max_order = std::min<std::size_t>(4, candidate.size());
  double log_precision_sum = 0.0;
  for (std::size_t n = 1; n <= max_order; ++n) {
    auto cand = ngram_counts(candidate, n);
    auto ref = ngram_counts(reference, n);
    std::uint64_t total = 0, matched = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    double precision = matched > 0
                           ? static_cast<double>(matched) / total
                           : kSmoothing;
    log_precision_sum += std::log(precision);
  }
  double geo_mean = std::exp(log_precision_sum / max_order);

  double ratio = static_cast<double>(reference.size()) / candidate.size();
  double brevity = std::min(1.0, std::exp(1.0 - ratio));
  return brevity * geo_mean;
}

}  // namespace storyeval
