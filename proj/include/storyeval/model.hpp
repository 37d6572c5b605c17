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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "storyeval/corpus_io.hpp"
#include "storyeval/perturb.hpp"
#include "storyeval/story.hpp"
#include "storyeval/tensor.hpp"
#include "storyeval/vocab.hpp"

namespace storyeval {

/// Architecture of the scorer. The defaults are the desk-scale reference
/// configuration: trainable in minutes on one core.
struct ModelConfig {
  int hidden = 128;    // width d, divisible by heads
  int layers = 2;      // encoder blocks
  int heads = 4;       // attention heads
  int ffn = 512;       // feed-forward width
  int max_len = 64;    // positions, including the two boundary tokens
  int vocab = 0;       // filled in when a model is built
  double lambda = 0.1; // reconstruction loss weight
  double dropout = 0.1;

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

struct TrainConfig {
  int batch_size = 10;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int epochs = 5;
  std::uint64_t seed = 0;
  double clip_norm = 1.0;

  void validate() const;
};

template <typename S>
struct BlockParams {
  Tensor<S> wq, bq, wk, bk, wv, bv, wo, bo;
  Tensor<S> ln1_gamma, ln1_beta;
  Tensor<S> w1, b1, w2, b2;
  Tensor<S> ln2_gamma, ln2_beta;
};

/// All trainable tensors. for_each visits them in the declared order, which
/// is also the checkpoint order: token embeddings, position embeddings,
/// per-block attention/norm/feed-forward tensors, classification head,
/// reconstruction head.
template <typename S>
struct Params {
  Tensor<S> tok_emb;  // V x d
  Tensor<S> pos_emb;  // P x d
  std::vector<BlockParams<S>> blocks;
  Tensor<S> w_c, b_c;  // 1 x d, 1 x 1
  Tensor<S> w_r, b_r;  // d x V (input-major), 1 x V

  void init_shapes(const ModelConfig& cfg);

  template <typename F>
  void for_each(F&& f) {
    f(tok_emb);
    f(pos_emb);
    for (auto& b : blocks) {
      f(b.wq); f(b.bq); f(b.wk); f(b.bk); f(b.wv); f(b.bv); f(b.wo); f(b.bo);
      f(b.ln1_gamma); f(b.ln1_beta);
      f(b.w1); f(b.b1); f(b.w2); f(b.b2);
      f(b.ln2_gamma); f(b.ln2_beta);
    }
    f(w_c); f(b_c);
    f(w_r); f(b_r);
  }
  template <typename F>
  void for_each(F&& f) const {
    const_cast<Params*>(this)->for_each([&](auto& t) { f(t); });
  }
};

template <typename S>
struct Model {
  ModelConfig config;
  Vocab vocab;
  Params<S> params;

  static Model random_init(const ModelConfig& cfg, const Vocab& vocab,
                           std::uint64_t seed);
};

using ScorerModel = Model<float>;

/// Token-id rows ready for the encoder: BOS + tokens + EOS, PAD to a common
/// length, labels and left-aligned reconstruction targets (original-story
/// ids; positions past the original or non-token positions are masked out).
struct EncodedBatch {
  int batch = 0;
  int length = 0;
  std::vector<std::int32_t> ids;
  std::vector<std::uint8_t> attention_mask;
  std::vector<int> labels;
  std::vector<std::int32_t> recon_targets;
  std::vector<std::uint8_t> recon_mask;
};

EncodedBatch encode_batch(std::span<const TrainingPair> pairs,
                          const Vocab& vocab, int max_len);

/// BOS + encoded tokens + EOS, truncated to max_len; mask all ones.
std::pair<std::vector<std::int32_t>, std::vector<std::uint8_t>> prepare_input(
    const Vocab& vocab, const Tokens& tokens, int max_len);

struct EncodeOutput {
  std::vector<double> pooled;        // d
  std::vector<double> token_states;  // length x d, row-major
  int length = 0;
};

/// Deterministic inference-mode encoder over one prepared row.
template <typename S>
EncodeOutput encode(const Model<S>& model, std::span<const std::int32_t> ids,
                    std::span<const std::uint8_t> mask);

/// sigmoid(W_c . pooled + b_c): probability the sequence is human-written.
template <typename S>
double score(const Model<S>& model, std::span<const std::int32_t> ids,
             std::span<const std::uint8_t> mask);

/// Per-position softmax distributions over the vocabulary, length x V.
template <typename S>
std::vector<double> reconstruction_distributions(
    const Model<S>& model, std::span<const std::int32_t> ids,
    std::span<const std::uint8_t> mask);

/// Binary cross-entropy computed from the logit for stability.
double classification_loss_from_logit(double logit, int y);
/// Convenience form on a probability in (0, 1).
double classification_loss(double y_hat, int y);

/// Mean token negative log-likelihood over on-mask positions of one row of
/// logits (length x V); 0 when the mask is empty.
double reconstruction_loss(std::span<const double> logits, int vocab,
                           std::span<const std::int32_t> targets,
                           std::span<const std::uint8_t> mask);

struct LossBreakdown {
  double classification = 0.0;
  double reconstruction = 0.0;
  double combined = 0.0;
};

/// Batch-mean classification + lambda * reconstruction loss, inference mode.
template <typename S>
LossBreakdown combined_loss(const Model<S>& model, const EncodedBatch& batch,
                            double lambda);

/// Tokenize-free scoring of an already tokenized story: flatten, map through
/// the vocabulary (UNK for out-of-vocabulary), truncate, add boundaries.
template <typename S>
double score_story(const Model<S>& model, const Story& story);

struct TrainResult {
  ScorerModel model;
  std::vector<double> epoch_mean_loss;
};

/// Called after each epoch; return false to stop early.
using EpochCallback =
    std::function<bool(int epoch, double mean_loss, const ScorerModel& model)>;

/// Mini-batch Adam on the combined objective, with per-epoch shuffling and
/// global-norm gradient clipping, fully determined by (pairs, configs, seed).
TrainResult train(const std::vector<TrainingPair>& pairs, const Vocab& vocab,
                  const ModelConfig& mcfg, const TrainConfig& tcfg,
                  const EpochCallback& callback = {});

/// Max relative error between analytic gradients and central finite
/// differences over `coords` randomly sampled parameter coordinates.
/// Meant for small double-precision configurations.
template <typename S>
double gradient_check(const Model<S>& model, const EncodedBatch& batch,
                      double lambda, double epsilon, int coords,
                      std::uint64_t seed);

/// Gradients of the combined loss for every parameter tensor (test hook).
template <typename S>
Params<S> compute_gradients(const Model<S>& model, const EncodedBatch& batch,
                            double lambda);

/// Checkpoint: "UNMF" magic, format version, provenance header, ModelConfig,
/// vocabulary, then parameter tensors in declared order as little-endian
/// 32-bit floats.
void save_model(const ScorerModel& model, const std::filesystem::path& path,
                const FileHeader& meta = {});
ScorerModel load_model(const std::filesystem::path& path,
                       FileHeader* meta = nullptr);
/// Refuses checkpoints whose stored configuration differs from `expected`.
ScorerModel load_model(const std::filesystem::path& path,
                       const ModelConfig& expected, FileHeader* meta = nullptr);

}  // namespace storyeval
