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
#include <optional>
#include <string>
#include <vector>

#include "storyeval/story.hpp"

namespace storyeval {

/// Provenance header written as the first line of every tool-produced JSONL
/// file: {"_header": {"config_hash": ..., "seed": ...}}. Loaders skip it.
struct FileHeader {
  std::string config_hash;
  std::uint64_t seed = 0;
};

/// corpus.jsonl: {"id": str, "context": str, "body": [str, ...]} per line.
/// Sentence strings are tokenized on load. Malformed lines raise Error with
/// the line number; annotation records must carry exactly 7 labels.
std::vector<Story> load_corpus(const std::filesystem::path& path);

/// annotations.jsonl adds "labels": [int x7] and "error_types": [[str,...] x7]
/// with error strings in {repe, cohe, conf, chao, others}.
std::vector<AnnotatedStory> load_annotations(const std::filesystem::path& path);

/// scores.jsonl: {"id": str, "score": float} per line, order preserved.
std::vector<std::pair<std::string, double>> load_scores(
    const std::filesystem::path& path);

void save_corpus(const std::vector<Story>& stories,
                 const std::filesystem::path& path,
                 const std::optional<FileHeader>& header = std::nullopt);
void save_annotations(const std::vector<AnnotatedStory>& annotations,
                      const std::filesystem::path& path,
                      const std::optional<FileHeader>& header = std::nullopt);
void save_scores(const std::vector<std::pair<std::string, double>>& scores,
                 const std::filesystem::path& path,
                 const std::optional<FileHeader>& header = std::nullopt);

}  // namespace storyeval
