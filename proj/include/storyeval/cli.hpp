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
#include <iosfwd>
#include <optional>
#include <string>

#include "storyeval/model.hpp"
#include "storyeval/perturb.hpp"

namespace storyeval::cli {

struct RunPaths {
  std::filesystem::path corpus;
  std::filesystem::path kb;
  std::filesystem::path verbs;
  std::filesystem::path pos;
  std::filesystem::path names;        // optional; empty = no delexicalization
  std::filesystem::path annotations;
  std::filesystem::path stories;      // stories to score
  std::filesystem::path pairs;        // defaults to <out_dir>/pairs.jsonl
  std::filesystem::path checkpoint;   // defaults to <out_dir>/model.ckpt
  std::filesystem::path scores;       // defaults to <out_dir>/scores.jsonl
  std::filesystem::path out_dir = "out";
};

/// One config file drives every subcommand; flags override single values.
/// INI-style sections with key = value lines; list values are
/// space-separated.
struct RunConfig {
  RunPaths paths;
  std::size_t corpus_max_words = 200;
  std::size_t vocab_min_freq = 2;
  MixerConfig mixer;
  ModelConfig model;
  TrainConfig trainer;
  std::uint64_t seed = 0;

  /// Stable serialized form of the resolved config; hashed into outputs.
  std::string canonical() const;
  std::string config_hash() const;
  FileHeader header() const { return {config_hash(), seed}; }
};

RunConfig parse_run_config(const std::filesystem::path& path);

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<std::filesystem::path> out_dir;
  bool json = false;  // report format for evaluate
};

void apply_overrides(RunConfig& config, const CommandOptions& options);

// Subcommands; all log to `log` and write data to files only. They throw
// storyeval::Error on failure; main maps that to a nonzero exit.
void cmd_perturb(const RunConfig& config, std::ostream& log);
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_score(const RunConfig& config, std::ostream& log);
void cmd_evaluate(const RunConfig& config, bool json_format, std::ostream& log);
void cmd_bias(const RunConfig& config, std::ostream& log);
void cmd_ablate(const RunConfig& config, std::ostream& log);

}  // namespace storyeval::cli
