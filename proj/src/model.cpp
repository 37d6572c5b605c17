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

#include "storyeval/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "storyeval/error.hpp"
#include "storyeval/rng.hpp"

namespace storyeval {

void ModelConfig::validate() const {
  if (hidden <= 0 || layers <= 0 || heads <= 0 || ffn <= 0)
    throw Error("ModelConfig: sizes must be positive");
  if (hidden % heads != 0) throw Error("ModelConfig: hidden % heads != 0");
  if (max_len < 3) throw Error("ModelConfig: max_len must be >= 3");
  if (vocab < Vocab::kReserved) throw Error("ModelConfig: vocab too small");
  if (lambda < 0.0) throw Error("ModelConfig: lambda must be >= 0");
  if (dropout < 0.0 || dropout >= 1.0)
    throw Error("ModelConfig: dropout must be in [0, 1)");
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw Error("TrainConfig: batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw Error("TrainConfig: learning_rate must be > 0");
  if (epochs < 1) throw Error("TrainConfig: epochs must be >= 1");
  if (clip_norm <= 0.0) throw Error("TrainConfig: clip_norm must be > 0");
}

template <typename S>
void Params<S>::init_shapes(const ModelConfig& cfg) {
  const std::size_t d = cfg.hidden, f = cfg.ffn, v = cfg.vocab, p = cfg.max_len;
  tok_emb.resize(v, d);
  pos_emb.resize(p, d);
  blocks.assign(cfg.layers, {});
  for (auto& b : blocks) {
    b.wq.resize(d, d); b.bq.resize(1, d);
    b.wk.resize(d, d); b.bk.resize(1, d);
    b.wv.resize(d, d); b.bv.resize(1, d);
    b.wo.resize(d, d); b.bo.resize(1, d);
    b.ln1_gamma.resize(1, d); b.ln1_beta.resize(1, d);
    b.w1.resize(d, f); b.b1.resize(1, f);
    b.w2.resize(f, d); b.b2.resize(1, d);
    b.ln2_gamma.resize(1, d); b.ln2_beta.resize(1, d);
  }
  w_c.resize(1, d);
  b_c.resize(1, 1);
  w_r.resize(d, v);
  b_r.resize(1, v);
}

namespace {

double gauss(Rng& rng) {
  double u1 = 1.0 - rng.uniform();
  double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

template <typename S>
void fill_normal(Tensor<S>& t, Rng& rng, double stddev) {
  for (auto& x : t.v) x = static_cast<S>(gauss(rng) * stddev);
}

template <typename S>
void fill_value(Tensor<S>& t, S value) {
  std::fill(t.v.begin(), t.v.end(), value);
}

}  // namespace

template <typename S>
Model<S> Model<S>::random_init(const ModelConfig& cfg, const Vocab& vocab,
                               std::uint64_t seed) {
  ModelConfig c = cfg;
  c.vocab = vocab.size();
  c.validate();
  Model<S> m;
  m.config = c;
  m.vocab = vocab;
  m.params.init_shapes(c);
  Rng rng(seed);
  constexpr double kStd = 0.02;
  fill_normal(m.params.tok_emb, rng, kStd);
  fill_normal(m.params.pos_emb, rng, kStd);
  for (auto& b : m.params.blocks) {
    fill_normal(b.wq, rng, kStd);
    fill_normal(b.wk, rng, kStd);
    fill_normal(b.wv, rng, kStd);
    fill_normal(b.wo, rng, kStd);
    fill_value(b.ln1_gamma, S(1));
    fill_normal(b.w1, rng, kStd);
    fill_normal(b.w2, rng, kStd);
    fill_value(b.ln2_gamma, S(1));
  }
  fill_normal(m.params.w_c, rng, kStd);
  fill_normal(m.params.w_r, rng, kStd);
  return m;
}

// ---------------------------------------------------------------------------
// Batch assembly
// ---------------------------------------------------------------------------

namespace {

struct PreparedRow {
  std::vector<std::int32_t> s_ids;
  std::vector<std::int32_t> r_ids;
  int y = 1;
};

PreparedRow prepare_row(const TrainingPair& pair, const Vocab& vocab,
                        int max_len) {
  const std::size_t budget = static_cast<std::size_t>(max_len - 2);
  PreparedRow row;
  row.s_ids = vocab.encode(pair.s.flatten());
  if (row.s_ids.size() > budget) row.s_ids.resize(budget);
  row.r_ids = vocab.encode(pair.r.flatten());
  if (row.r_ids.size() > budget) row.r_ids.resize(budget);
  row.y = pair.y;
  return row;
}

EncodedBatch assemble(std::span<const PreparedRow> rows, int max_len) {
  EncodedBatch batch;
  batch.batch = static_cast<int>(rows.size());
  std::size_t longest = 0;
  for (const auto& r : rows) longest = std::max(longest, r.s_ids.size());
  batch.length = static_cast<int>(std::min<std::size_t>(longest + 2, max_len));
  const std::size_t L = batch.length;
  const std::size_t total = rows.size() * L;
  batch.ids.assign(total, Vocab::kPad);
  batch.attention_mask.assign(total, 0);
  batch.recon_targets.assign(total, Vocab::kPad);
  batch.recon_mask.assign(total, 0);
  batch.labels.resize(rows.size());
  for (std::size_t b = 0; b < rows.size(); ++b) {
    const PreparedRow& row = rows[b];
    std::size_t base = b * L;
    batch.labels[b] = row.y;
    batch.ids[base] = Vocab::kBos;
    batch.attention_mask[base] = 1;
    for (std::size_t i = 0; i < row.s_ids.size(); ++i) {
      batch.ids[base + 1 + i] = row.s_ids[i];
      batch.attention_mask[base + 1 + i] = 1;
      if (i < row.r_ids.size()) {
        batch.recon_targets[base + 1 + i] = row.r_ids[i];
        batch.recon_mask[base + 1 + i] = 1;
      }
    }
    std::size_t eos = base + 1 + row.s_ids.size();
    batch.ids[eos] = Vocab::kEos;
    batch.attention_mask[eos] = 1;
  }
  return batch;
}

}  // namespace

EncodedBatch encode_batch(std::span<const TrainingPair> pairs,
                          const Vocab& vocab, int max_len) {
  if (pairs.empty()) throw Error("encode_batch: empty batch");
  if (max_len < 3) throw Error("encode_batch: max_len must be >= 3");
  std::vector<PreparedRow> rows;
  rows.reserve(pairs.size());
  for (const auto& p : pairs) rows.push_back(prepare_row(p, vocab, max_len));
  return assemble(rows, max_len);
}

std::pair<std::vector<std::int32_t>, std::vector<std::uint8_t>> prepare_input(
    const Vocab& vocab, const Tokens& tokens, int max_len) {
  std::vector<std::int32_t> ids = vocab.encode(tokens);
  const std::size_t budget = static_cast<std::size_t>(max_len - 2);
  if (ids.size() > budget) ids.resize(budget);
  std::vector<std::int32_t> full;
  full.reserve(ids.size() + 2);
  full.push_back(Vocab::kBos);
  full.insert(full.end(), ids.begin(), ids.end());
  full.push_back(Vocab::kEos);
  return {std::move(full), std::vector<std::uint8_t>(full.size(), 1)};
}

// ---------------------------------------------------------------------------
// Forward / backward
// ---------------------------------------------------------------------------

namespace {

template <typename S>
struct BlockCache {
  Tensor<S> x_in, q, k, v, probs, ctx, attn_out, attn_drop;
  Tensor<S> res1, ln1_out, ff1, ff1_act, ff2, ff_drop, res2, ln2_out;
  std::vector<S> ln1_mean, ln1_rstd, ln2_mean, ln2_rstd;
};

template <typename S>
struct ForwardCache {
  int B = 0, L = 0;
  Tensor<S> emb;  // post-dropout embedding sum
  Tensor<S> emb_drop;
  std::vector<BlockCache<S>> blocks;
  std::vector<double> cls_logits;      // B
  Tensor<S> recon_probs;               // (B*L) x V, only when lambda > 0
  std::vector<int> recon_counts;       // per-sample on-mask positions
  std::vector<double> recon_loss_per;  // per-sample mean NLL
  LossBreakdown loss;
};

constexpr double kLnEps = 1e-5;

template <typename S>
void add_bias_rows(Tensor<S>& x, const Tensor<S>& bias) {
  const std::size_t n = x.cols;
  for (std::size_t r = 0; r < x.rows; ++r) {
    S* row = x.row(r);
    const S* b = bias.data();
    for (std::size_t j = 0; j < n; ++j) row[j] += b[j];
  }
}

template <typename S>
void column_sums(const Tensor<S>& x, Tensor<S>& out) {
  for (std::size_t r = 0; r < x.rows; ++r) {
    const S* row = x.row(r);
    S* o = out.data();
    for (std::size_t j = 0; j < x.cols; ++j) o[j] += row[j];
  }
}

template <typename S>
void layer_norm_forward(const Tensor<S>& in, const Tensor<S>& gamma,
                        const Tensor<S>& beta, Tensor<S>& out,
                        std::vector<S>& mean, std::vector<S>& rstd) {
  const std::size_t d = in.cols;
  mean.resize(in.rows);
  rstd.resize(in.rows);
  for (std::size_t r = 0; r < in.rows; ++r) {
    const S* x = in.row(r);
    double mu = 0.0;
    for (std::size_t j = 0; j < d; ++j) mu += x[j];
    mu /= d;
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double dlt = x[j] - mu;
      var += dlt * dlt;
    }
    var /= d;
    double rs = 1.0 / std::sqrt(var + kLnEps);
    mean[r] = static_cast<S>(mu);
    rstd[r] = static_cast<S>(rs);
    S* y = out.row(r);
    const S* g = gamma.data();
    const S* b = beta.data();
    for (std::size_t j = 0; j < d; ++j)
      y[j] = static_cast<S>((x[j] - mu) * rs) * g[j] + b[j];
  }
}

template <typename S>
void layer_norm_backward(const Tensor<S>& dout, const Tensor<S>& in,
                         const Tensor<S>& gamma, const std::vector<S>& mean,
                         const std::vector<S>& rstd, Tensor<S>& din,
                         Tensor<S>& dgamma, Tensor<S>& dbeta) {
  const std::size_t d = in.cols;
  for (std::size_t r = 0; r < in.rows; ++r) {
    const S* dy = dout.row(r);
    const S* x = in.row(r);
    const S* g = gamma.data();
    const S mu = mean[r];
    const S rs = rstd[r];
    double sum_dyg = 0.0, sum_dyg_xhat = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double xhat = (x[j] - mu) * rs;
      double dyg = static_cast<double>(dy[j]) * g[j];
      sum_dyg += dyg;
      sum_dyg_xhat += dyg * xhat;
      dgamma.data()[j] += static_cast<S>(dy[j] * xhat);
      dbeta.data()[j] += dy[j];
    }
    const double inv_d = 1.0 / d;
    S* dx = din.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      double xhat = (x[j] - mu) * rs;
      double dyg = static_cast<double>(dy[j]) * g[j];
      dx[j] = static_cast<S>(rs * (dyg - inv_d * sum_dyg - xhat * inv_d * sum_dyg_xhat));
    }
  }
}

// GELU, tanh approximation. Smooth, so finite differences behave.
template <typename S>
inline S gelu(S x) {
  const double xd = x;
  const double c = 0.7978845608028654;  // sqrt(2/pi)
  double u = c * (xd + 0.044715 * xd * xd * xd);
  return static_cast<S>(0.5 * xd * (1.0 + std::tanh(u)));
}

template <typename S>
inline S gelu_grad(S x) {
  const double xd = x;
  const double c = 0.7978845608028654;
  double u = c * (xd + 0.044715 * xd * xd * xd);
  double t = std::tanh(u);
  double du = c * (1.0 + 3.0 * 0.044715 * xd * xd);
  return static_cast<S>(0.5 * (1.0 + t) + 0.5 * xd * (1.0 - t * t) * du);
}

template <typename S>
void apply_dropout(Tensor<S>& x, Tensor<S>& mask, double rate, Rng* rng) {
  if (rate <= 0.0 || rng == nullptr) {
    mask.resize(0, 0);
    return;
  }
  mask.resize(x.rows, x.cols);
  const S keep_scale = static_cast<S>(1.0 / (1.0 - rate));
  for (std::size_t i = 0; i < x.size(); ++i) {
    S m = rng->bernoulli(rate) ? S(0) : keep_scale;
    mask.v[i] = m;
    x.v[i] *= m;
  }
}

template <typename S>
void mask_multiply(Tensor<S>& grad, const Tensor<S>& mask) {
  if (mask.empty()) return;
  for (std::size_t i = 0; i < grad.size(); ++i) grad.v[i] *= mask.v[i];
}

template <typename S>
struct Scratch {
  std::vector<S> a, b, c;
  Tensor<S> dres, dff_wide, dff_wide2, dtmp, dq, dk, dv, dctx, dattn, dlogits;
  Tensor<S> dscores;
};

template <typename S>
double stable_bce_from_logit(double z, int y) {
  // max(z,0) - z*y + log(1 + exp(-|z|))
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::fabs(z)));
}

template <typename S>
void attention_forward(const Model<S>& model, const EncodedBatch& batch,
                       BlockCache<S>& c, int B, int L, Scratch<S>& scr) {
  const int d = model.config.hidden;
  const int H = model.config.heads;
  const int dh = d / H;
  c.probs.resize(static_cast<std::size_t>(B) * H * L, L);
  c.ctx.resize(static_cast<std::size_t>(B) * L, d);
  for (int b = 0; b < B; ++b) {
    const std::uint8_t* mask = batch.attention_mask.data() + b * L;
    for (int h = 0; h < H; ++h) {
      const S* qs = c.q.row(b * L) + h * dh;
      const S* ks = c.k.row(b * L) + h * dh;
      const S* vs = c.v.row(b * L) + h * dh;
      S* probs = c.probs.row((static_cast<std::size_t>(b) * H + h) * L);
      scr.a.resize(static_cast<std::size_t>(dh) * L);
      transpose(L, dh, ks, d, scr.a.data(), L);
      gemm_nn<S>(L, L, dh, qs, d, scr.a.data(), L, probs, L, false);
      for (int i = 0; i < L; ++i) {
        S* row = probs + static_cast<std::size_t>(i) * L;
        S mx = S(-1e30);
        for (int j = 0; j < L; ++j) {
          if (!mask[j]) row[j] = S(-1e30);
          mx = std::max(mx, row[j]);
        }
        double sum = 0.0;
        for (int j = 0; j < L; ++j) {
          double e = std::exp(static_cast<double>(row[j]) - static_cast<double>(mx));
          row[j] = static_cast<S>(e);
          sum += e;
        }
        const S inv = static_cast<S>(1.0 / sum);
        for (int j = 0; j < L; ++j) row[j] *= inv;
      }
      S* ctx = c.ctx.row(b * L) + h * dh;
      gemm_nn<S>(L, dh, L, probs, L, vs, d, ctx, d, false);
    }
  }
}

template <typename S>
void forward_pass(const Model<S>& model, const EncodedBatch& batch,
                  double lambda, Rng* dropout_rng, ForwardCache<S>& fc,
                  Scratch<S>& scr) {
  const ModelConfig& cfg = model.config;
  const int B = batch.batch;
  const int L = batch.length;
  const int d = cfg.hidden;
  const int V = cfg.vocab;
  const std::size_t R = static_cast<std::size_t>(B) * L;
  if (L > cfg.max_len) throw Error("sequence longer than max_len");
  const double drop = dropout_rng ? cfg.dropout : 0.0;

  fc.B = B;
  fc.L = L;
  fc.emb.resize(R, d);
  for (std::size_t r = 0; r < R; ++r) {
    std::int32_t id = batch.ids[r];
    if (id < 0 || id >= V) throw Error("token id out of range");
    const S* tok = model.params.tok_emb.row(id);
    const S* pos = model.params.pos_emb.row(r % L);
    S* out = fc.emb.row(r);
    for (int j = 0; j < d; ++j) out[j] = tok[j] + pos[j];
  }
  apply_dropout(fc.emb, fc.emb_drop, drop, dropout_rng);

  fc.blocks.assign(cfg.layers, {});
  const Tensor<S>* x = &fc.emb;
  const S attn_scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(d / cfg.heads)));
  for (int layer = 0; layer < cfg.layers; ++layer) {
    BlockCache<S>& c = fc.blocks[layer];
    const BlockParams<S>& p = model.params.blocks[layer];
    c.x_in = *x;
    c.q.resize(R, d);
    c.k.resize(R, d);
    c.v.resize(R, d);
    gemm_nn<S>(R, d, d, c.x_in.data(), d, p.wq.data(), d, c.q.data(), d, false);
    add_bias_rows(c.q, p.bq);
    for (auto& qv : c.q.v) qv *= attn_scale;
    gemm_nn<S>(R, d, d, c.x_in.data(), d, p.wk.data(), d, c.k.data(), d, false);
    add_bias_rows(c.k, p.bk);
    gemm_nn<S>(R, d, d, c.x_in.data(), d, p.wv.data(), d, c.v.data(), d, false);
    add_bias_rows(c.v, p.bv);

    attention_forward(model, batch, c, B, L, scr);

    c.attn_out.resize(R, d);
    gemm_nn<S>(R, d, d, c.ctx.data(), d, p.wo.data(), d, c.attn_out.data(), d, false);
    add_bias_rows(c.attn_out, p.bo);
    apply_dropout(c.attn_out, c.attn_drop, drop, dropout_rng);

    c.res1.resize(R, d);
    for (std::size_t i = 0; i < R * d; ++i)
      c.res1.v[i] = c.x_in.v[i] + c.attn_out.v[i];
    c.ln1_out.resize(R, d);
    layer_norm_forward(c.res1, p.ln1_gamma, p.ln1_beta, c.ln1_out, c.ln1_mean,
                       c.ln1_rstd);

    c.ff1.resize(R, cfg.ffn);
    gemm_nn<S>(R, cfg.ffn, d, c.ln1_out.data(), d, p.w1.data(), cfg.ffn,
               c.ff1.data(), cfg.ffn, false);
    add_bias_rows(c.ff1, p.b1);
    c.ff1_act.resize(R, cfg.ffn);
    for (std::size_t i = 0; i < c.ff1.size(); ++i)
      c.ff1_act.v[i] = gelu(c.ff1.v[i]);
    c.ff2.resize(R, d);
    gemm_nn<S>(R, d, cfg.ffn, c.ff1_act.data(), cfg.ffn, p.w2.data(), d,
               c.ff2.data(), d, false);
    add_bias_rows(c.ff2, p.b2);
    apply_dropout(c.ff2, c.ff_drop, drop, dropout_rng);

    c.res2.resize(R, d);
    for (std::size_t i = 0; i < R * d; ++i)
      c.res2.v[i] = c.ln1_out.v[i] + c.ff2.v[i];
    c.ln2_out.resize(R, d);
    layer_norm_forward(c.res2, p.ln2_gamma, p.ln2_beta, c.ln2_out, c.ln2_mean,
                       c.ln2_rstd);
    x = &c.ln2_out;
  }

  // Classification head on the BOS position.
  fc.cls_logits.assign(B, 0.0);
  double cls_sum = 0.0;
  for (int b = 0; b < B; ++b) {
    const S* pooled = x->row(static_cast<std::size_t>(b) * L);
    double z = static_cast<double>(model.params.b_c.v[0]);
    for (int j = 0; j < d; ++j)
      z += static_cast<double>(model.params.w_c.data()[j]) * pooled[j];
    fc.cls_logits[b] = z;
    cls_sum += stable_bce_from_logit<S>(z, batch.labels[b]);
  }

  // Reconstruction head; probabilities kept for the backward pass.
  fc.recon_counts.assign(B, 0);
  fc.recon_loss_per.assign(B, 0.0);
  double rec_sum = 0.0;
  if (lambda > 0.0) {
    fc.recon_probs.resize(R, V);
    gemm_nn<S>(R, V, d, x->data(), d, model.params.w_r.data(), V,
               fc.recon_probs.data(), V, false);
    add_bias_rows(fc.recon_probs, model.params.b_r);
    for (int b = 0; b < B; ++b) {
      double nll_sum = 0.0;
      int count = 0;
      for (int l = 0; l < L; ++l) {
        std::size_t r = static_cast<std::size_t>(b) * L + l;
        S* row = fc.recon_probs.row(r);
        // Softmax in place; loss only where the target mask is on.
        S mx = row[0];
        for (int j = 1; j < V; ++j) mx = std::max(mx, row[j]);
        double sum = 0.0;
        for (int j = 0; j < V; ++j) {
          double e = std::exp(static_cast<double>(row[j]) - static_cast<double>(mx));
          row[j] = static_cast<S>(e);
          sum += e;
        }
        const S inv = static_cast<S>(1.0 / sum);
        for (int j = 0; j < V; ++j) row[j] *= inv;
        if (batch.recon_mask[r]) {
          double p = static_cast<double>(row[batch.recon_targets[r]]);
          nll_sum += -std::log(std::max(p, 1e-300));
          ++count;
        }
      }
      fc.recon_counts[b] = count;
      fc.recon_loss_per[b] = count > 0 ? nll_sum / count : 0.0;
      rec_sum += fc.recon_loss_per[b];
    }
  }

  fc.loss.classification = cls_sum / B;
  fc.loss.reconstruction = rec_sum / B;
  fc.loss.combined = fc.loss.classification + lambda * fc.loss.reconstruction;
}

template <typename S>
void backward_pass(const Model<S>& model, const EncodedBatch& batch,
                   const ForwardCache<S>& fc, double lambda, Params<S>& grads,
                   Scratch<S>& scr) {
  const ModelConfig& cfg = model.config;
  const int B = fc.B;
  const int L = fc.L;
  const int d = cfg.hidden;
  const int H = cfg.heads;
  const int dh = d / H;
  const int V = cfg.vocab;
  const std::size_t R = static_cast<std::size_t>(B) * L;

  Tensor<S> dx(R, d);

  // Classification head.
  const Tensor<S>& top = fc.blocks.back().ln2_out;
  for (int b = 0; b < B; ++b) {
    double z = fc.cls_logits[b];
    double yhat = 1.0 / (1.0 + std::exp(-z));
    double dz = (yhat - batch.labels[b]) / B;
    const S* pooled = top.row(static_cast<std::size_t>(b) * L);
    S* dpooled = dx.row(static_cast<std::size_t>(b) * L);
    for (int j = 0; j < d; ++j) {
      grads.w_c.data()[j] += static_cast<S>(dz * pooled[j]);
      dpooled[j] += static_cast<S>(dz * model.params.w_c.data()[j]);
    }
    grads.b_c.v[0] += static_cast<S>(dz);
  }

  // Reconstruction head.
  if (lambda > 0.0) {
    scr.dlogits.resize(R, V);
    scr.dlogits.zero();
    for (int b = 0; b < B; ++b) {
      if (fc.recon_counts[b] == 0) continue;
      const double scale = lambda / (static_cast<double>(B) * fc.recon_counts[b]);
      for (int l = 0; l < L; ++l) {
        std::size_t r = static_cast<std::size_t>(b) * L + l;
        if (!batch.recon_mask[r]) continue;
        const S* probs = fc.recon_probs.row(r);
        S* dl = scr.dlogits.row(r);
        for (int j = 0; j < V; ++j) dl[j] = static_cast<S>(probs[j] * scale);
        dl[batch.recon_targets[r]] -= static_cast<S>(scale);
      }
    }
    gemm_tn<S>(d, V, R, top.data(), d, scr.dlogits.data(), V,
               grads.w_r.data(), V, true);
    column_sums(scr.dlogits, grads.b_r);
    gemm_nt<S>(R, d, V, scr.dlogits.data(), V, model.params.w_r.data(), V,
               dx.data(), d, true, scr.a);
  }

  // Blocks in reverse.
  for (int layer = cfg.layers - 1; layer >= 0; --layer) {
    const BlockCache<S>& c = fc.blocks[layer];
    const BlockParams<S>& p = model.params.blocks[layer];
    BlockParams<S>& g = grads.blocks[layer];

    scr.dres.resize(R, d);
    scr.dres.zero();
    layer_norm_backward(dx, c.res2, p.ln2_gamma, c.ln2_mean, c.ln2_rstd,
                        scr.dres, g.ln2_gamma, g.ln2_beta);

    // dres -> ln1_out (residual) and ff branch
    Tensor<S>& dln1 = dx;  // reuse: gradient wrt ln1_out accumulates here
    dln1 = scr.dres;

    scr.dtmp.resize(R, d);
    scr.dtmp = scr.dres;
    mask_multiply(scr.dtmp, c.ff_drop);  // d ff2 (pre-dropout)
    column_sums(scr.dtmp, g.b2);
    gemm_tn<S>(cfg.ffn, d, R, c.ff1_act.data(), cfg.ffn, scr.dtmp.data(), d,
               g.w2.data(), d, true);
    scr.dff_wide.resize(R, cfg.ffn);
    gemm_nt<S>(R, cfg.ffn, d, scr.dtmp.data(), d, p.w2.data(), d,
               scr.dff_wide.data(), cfg.ffn, false, scr.a);
    for (std::size_t i = 0; i < scr.dff_wide.size(); ++i)
      scr.dff_wide.v[i] *= gelu_grad(c.ff1.v[i]);
    column_sums(scr.dff_wide, g.b1);
    gemm_tn<S>(d, cfg.ffn, R, c.ln1_out.data(), d, scr.dff_wide.data(),
               cfg.ffn, g.w1.data(), cfg.ffn, true);
    gemm_nt<S>(R, d, cfg.ffn, scr.dff_wide.data(), cfg.ffn, p.w1.data(),
               cfg.ffn, dln1.data(), d, true, scr.a);

    scr.dres.zero();
    layer_norm_backward(dln1, c.res1, p.ln1_gamma, c.ln1_mean, c.ln1_rstd,
                        scr.dres, g.ln1_gamma, g.ln1_beta);

    // dres: gradient wrt res1 = x_in + dropout(attn_out)
    scr.dattn.resize(R, d);
    scr.dattn = scr.dres;
    mask_multiply(scr.dattn, c.attn_drop);  // d attn_out (pre-dropout)

    Tensor<S>& dx_in = dx;  // gradient wrt block input accumulates here
    dx_in = scr.dres;

    column_sums(scr.dattn, g.bo);
    gemm_tn<S>(d, d, R, c.ctx.data(), d, scr.dattn.data(), d, g.wo.data(), d,
               true);
    scr.dctx.resize(R, d);
    gemm_nt<S>(R, d, d, scr.dattn.data(), d, p.wo.data(), d, scr.dctx.data(),
               d, false, scr.a);

    scr.dq.resize(R, d);
    scr.dq.zero();
    scr.dk.resize(R, d);
    scr.dk.zero();
    scr.dv.resize(R, d);
    scr.dv.zero();
    scr.dscores.resize(L, L);
    for (int b = 0; b < B; ++b) {
      for (int h = 0; h < H; ++h) {
        const S* qs = c.q.row(static_cast<std::size_t>(b) * L) + h * dh;
        const S* ks = c.k.row(static_cast<std::size_t>(b) * L) + h * dh;
        const S* vs = c.v.row(static_cast<std::size_t>(b) * L) + h * dh;
        const S* probs = c.probs.row((static_cast<std::size_t>(b) * H + h) * L);
        const S* dctx_s = scr.dctx.row(static_cast<std::size_t>(b) * L) + h * dh;
        S* dqs = scr.dq.row(static_cast<std::size_t>(b) * L) + h * dh;
        S* dks = scr.dk.row(static_cast<std::size_t>(b) * L) + h * dh;
        S* dvs = scr.dv.row(static_cast<std::size_t>(b) * L) + h * dh;

        // dprobs = dctx . v^T
        scr.dscores.zero();
        gemm_nt<S>(L, L, dh, dctx_s, d, vs, d, scr.dscores.data(), L, false,
                   scr.a);
        // dv += probs^T . dctx
        gemm_tn<S>(L, dh, L, probs, L, dctx_s, d, dvs, d, true);
        // softmax backward, rows
        for (int i = 0; i < L; ++i) {
          S* ds = scr.dscores.row(i);
          const S* pr = probs + static_cast<std::size_t>(i) * L;
          double dot = 0.0;
          for (int j = 0; j < L; ++j) dot += static_cast<double>(ds[j]) * pr[j];
          for (int j = 0; j < L; ++j)
            ds[j] = static_cast<S>((static_cast<double>(ds[j]) - dot) * pr[j]);
        }
        // dq += dscores . k ; dk += dscores^T . q
        gemm_nn<S>(L, dh, L, scr.dscores.data(), L, ks, d, dqs, d, true);
        gemm_tn<S>(L, dh, L, scr.dscores.data(), L, qs, d, dks, d, true);
      }
    }
    const S attn_scale = static_cast<S>(1.0 / std::sqrt(static_cast<double>(dh)));
    for (auto& v : scr.dq.v) v *= attn_scale;

    column_sums(scr.dq, g.bq);
    gemm_tn<S>(d, d, R, c.x_in.data(), d, scr.dq.data(), d, g.wq.data(), d, true);
    gemm_nt<S>(R, d, d, scr.dq.data(), d, p.wq.data(), d, dx_in.data(), d,
               true, scr.a);
    column_sums(scr.dk, g.bk);
    gemm_tn<S>(d, d, R, c.x_in.data(), d, scr.dk.data(), d, g.wk.data(), d, true);
    gemm_nt<S>(R, d, d, scr.dk.data(), d, p.wk.data(), d, dx_in.data(), d,
               true, scr.a);
    column_sums(scr.dv, g.bv);
    gemm_tn<S>(d, d, R, c.x_in.data(), d, scr.dv.data(), d, g.wv.data(), d, true);
    gemm_nt<S>(R, d, d, scr.dv.data(), d, p.wv.data(), d, dx_in.data(), d,
               true, scr.a);
  }

  // Embedding gradients.
  mask_multiply(dx, fc.emb_drop);
  for (std::size_t r = 0; r < R; ++r) {
    const S* src = dx.row(r);
    S* tok = grads.tok_emb.row(batch.ids[r]);
    S* pos = grads.pos_emb.row(r % L);
    for (int j = 0; j < d; ++j) {
      tok[j] += src[j];
      pos[j] += src[j];
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public inference surface
// ---------------------------------------------------------------------------

namespace {

template <typename S>
EncodedBatch single_row_batch(const Model<S>& model,
                              std::span<const std::int32_t> ids,
                              std::span<const std::uint8_t> mask) {
  if (ids.empty()) throw Error("encode: empty input");
  if (ids.size() != mask.size()) throw Error("encode: ids/mask length mismatch");
  if (static_cast<int>(ids.size()) > model.config.max_len)
    throw Error("encode: sequence longer than max_len; truncate first");
  for (std::int32_t id : ids)
    if (id < 0 || id >= model.config.vocab)
      throw Error("encode: token id out of range");
  EncodedBatch batch;
  batch.batch = 1;
  batch.length = static_cast<int>(ids.size());
  batch.ids.assign(ids.begin(), ids.end());
  batch.attention_mask.assign(mask.begin(), mask.end());
  batch.labels = {0};
  batch.recon_targets.assign(ids.size(), Vocab::kPad);
  batch.recon_mask.assign(ids.size(), 0);
  return batch;
}

}  // namespace

template <typename S>
EncodeOutput encode(const Model<S>& model, std::span<const std::int32_t> ids,
                    std::span<const std::uint8_t> mask) {
  EncodedBatch batch = single_row_batch(model, ids, mask);
  ForwardCache<S> fc;
  Scratch<S> scr;
  forward_pass(model, batch, 0.0, nullptr, fc, scr);
  const Tensor<S>& top = fc.blocks.back().ln2_out;
  EncodeOutput out;
  out.length = batch.length;
  out.token_states.resize(static_cast<std::size_t>(batch.length) * model.config.hidden);
  for (std::size_t i = 0; i < out.token_states.size(); ++i)
    out.token_states[i] = static_cast<double>(top.v[i]);
  out.pooled.assign(out.token_states.begin(),
                    out.token_states.begin() + model.config.hidden);
  return out;
}

template <typename S>
double score(const Model<S>& model, std::span<const std::int32_t> ids,
             std::span<const std::uint8_t> mask) {
  EncodedBatch batch = single_row_batch(model, ids, mask);
  ForwardCache<S> fc;
  Scratch<S> scr;
  forward_pass(model, batch, 0.0, nullptr, fc, scr);
  double yhat = 1.0 / (1.0 + std::exp(-fc.cls_logits[0]));
  return std::clamp(yhat, 1e-12, 1.0 - 1e-12);
}

template <typename S>
std::vector<double> reconstruction_distributions(
    const Model<S>& model, std::span<const std::int32_t> ids,
    std::span<const std::uint8_t> mask) {
  EncodedBatch batch = single_row_batch(model, ids, mask);
  // recon_mask stays off; request probabilities via lambda > 0 with targets
  // masked out, which skips the loss but fills the distributions.
  ForwardCache<S> fc;
  Scratch<S> scr;
  forward_pass(model, batch, 1.0, nullptr, fc, scr);
  std::vector<double> out(fc.recon_probs.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<double>(fc.recon_probs.v[i]);
  return out;
}

double classification_loss_from_logit(double logit, int y) {
  if (y != 0 && y != 1) throw Error("classification_loss: y must be 0 or 1");
  return stable_bce_from_logit<double>(logit, y);
}

double classification_loss(double y_hat, int y) {
  if (!(y_hat > 0.0 && y_hat < 1.0))
    throw Error("classification_loss: y_hat must lie in (0, 1)");
  return classification_loss_from_logit(std::log(y_hat / (1.0 - y_hat)), y);
}

double reconstruction_loss(std::span<const double> logits, int vocab,
                           std::span<const std::int32_t> targets,
                           std::span<const std::uint8_t> mask) {
  if (vocab <= 0) throw Error("reconstruction_loss: vocab must be positive");
  const std::size_t positions = logits.size() / vocab;
  if (positions * static_cast<std::size_t>(vocab) != logits.size() ||
      targets.size() != positions || mask.size() != positions)
    throw Error("reconstruction_loss: shape mismatch");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < positions; ++r) {
    if (!mask[r]) continue;
    const double* row = logits.data() + r * vocab;
    double mx = row[0];
    for (int j = 1; j < vocab; ++j) mx = std::max(mx, row[j]);
    double lse = 0.0;
    for (int j = 0; j < vocab; ++j) lse += std::exp(row[j] - mx);
    lse = mx + std::log(lse);
    std::int32_t t = targets[r];
    if (t < 0 || t >= vocab) throw Error("reconstruction_loss: target out of range");
    sum += lse - row[t];
    ++count;
  }
  return count == 0 ? 0.0 : sum / count;
}

template <typename S>
LossBreakdown combined_loss(const Model<S>& model, const EncodedBatch& batch,
                            double lambda) {
  if (lambda < 0.0) throw Error("combined_loss: lambda must be >= 0");
  ForwardCache<S> fc;
  Scratch<S> scr;
  forward_pass(model, batch, lambda, nullptr, fc, scr);
  return fc.loss;
}

template <typename S>
double score_story(const Model<S>& model, const Story& story) {
  auto [ids, mask] = prepare_input(model.vocab, story.flatten(), model.config.max_len);
  return score(model, ids, mask);
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

template <typename S>
double global_grad_norm(Params<S>& grads) {
  double sq = 0.0;
  grads.for_each([&](Tensor<S>& t) {
    for (S v : t.v) sq += static_cast<double>(v) * static_cast<double>(v);
  });
  return std::sqrt(sq);
}

template <typename S>
void scale_params(Params<S>& grads, double factor) {
  grads.for_each([&](Tensor<S>& t) {
    for (S& v : t.v) v = static_cast<S>(v * factor);
  });
}

}  // namespace

TrainResult train(const std::vector<TrainingPair>& pairs, const Vocab& vocab,
                  const ModelConfig& mcfg, const TrainConfig& tcfg,
                  const EpochCallback& callback) {
  if (pairs.empty()) throw Error("train: no training pairs");
  tcfg.validate();
  bool has_pos = false, has_neg = false;
  for (const auto& p : pairs) (p.y == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw Error("train: need both positive and negative pairs");

  ModelConfig cfg = mcfg;
  cfg.vocab = vocab.size();
  cfg.validate();
  ScorerModel model =
      ScorerModel::random_init(cfg, vocab, derive_seed(tcfg.seed, "init"));

  std::vector<PreparedRow> prepared;
  prepared.reserve(pairs.size());
  for (const auto& p : pairs) prepared.push_back(prepare_row(p, vocab, cfg.max_len));

  Params<float> grads, m_state, v_state;
  grads.init_shapes(cfg);
  m_state.init_shapes(cfg);
  v_state.init_shapes(cfg);

  const std::size_t n = prepared.size();
  std::vector<std::size_t> order(n);
  TrainResult result{std::move(model), {}};
  ForwardCache<float> fc;
  Scratch<float> scr;
  long step = 0;
  for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(tcfg.seed, "shuffle/" + std::to_string(epoch)));
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    Rng dropout_rng(derive_seed(tcfg.seed, "dropout/" + std::to_string(epoch)));

    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < n; start += tcfg.batch_size, ++batch_index) {
      std::size_t end = std::min(n, start + tcfg.batch_size);
      std::vector<PreparedRow> rows(end - start);
      for (std::size_t i = start; i < end; ++i) rows[i - start] = prepared[order[i]];
      EncodedBatch batch = assemble(rows, cfg.max_len);

      forward_pass(result.model, batch, cfg.lambda, &dropout_rng, fc, scr);
      if (!std::isfinite(fc.loss.combined))
        throw Error("train: non-finite loss at epoch " + std::to_string(epoch) +
                    ", batch " + std::to_string(batch_index));
      loss_sum += fc.loss.combined * batch.batch;

      grads.for_each([](Tensor<float>& t) { t.zero(); });
      backward_pass(result.model, batch, fc, cfg.lambda, grads, scr);

      double norm = global_grad_norm(grads);
      if (norm > tcfg.clip_norm) scale_params(grads, tcfg.clip_norm / norm);

      ++step;
      const double c1 = 1.0 / (1.0 - std::pow(tcfg.beta1, step));
      const double c2 = 1.0 / (1.0 - std::pow(tcfg.beta2, step));
      const float b1 = static_cast<float>(tcfg.beta1);
      const float b2 = static_cast<float>(tcfg.beta2);
      const float lr = static_cast<float>(tcfg.learning_rate);
      const float eps = static_cast<float>(tcfg.epsilon);
      Tensor<float>* mt = nullptr;
      Tensor<float>* vt = nullptr;
      std::vector<Tensor<float>*> m_list, v_list, g_list, p_list;
      m_state.for_each([&](Tensor<float>& t) { m_list.push_back(&t); });
      v_state.for_each([&](Tensor<float>& t) { v_list.push_back(&t); });
      grads.for_each([&](Tensor<float>& t) { g_list.push_back(&t); });
      result.model.params.for_each([&](Tensor<float>& t) { p_list.push_back(&t); });
      for (std::size_t ti = 0; ti < p_list.size(); ++ti) {
        mt = m_list[ti];
        vt = v_list[ti];
        Tensor<float>* gt = g_list[ti];
        Tensor<float>* pt = p_list[ti];
        for (std::size_t i = 0; i < pt->size(); ++i) {
          float g = gt->v[i];
          float& m = mt->v[i];
          float& vv = vt->v[i];
          m = b1 * m + (1.0f - b1) * g;
          vv = b2 * vv + (1.0f - b2) * g * g;
          float mhat = m * static_cast<float>(c1);
          float vhat = vv * static_cast<float>(c2);
          pt->v[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
      }
    }
    result.epoch_mean_loss.push_back(loss_sum / n);
    if (callback && !callback(epoch, result.epoch_mean_loss.back(), result.model))
      break;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Gradient checking
// ---------------------------------------------------------------------------

template <typename S>
Params<S> compute_gradients(const Model<S>& model, const EncodedBatch& batch,
                            double lambda) {
  Params<S> grads;
  grads.init_shapes(model.config);
  ForwardCache<S> fc;
  Scratch<S> scr;
  forward_pass(model, batch, lambda, nullptr, fc, scr);
  backward_pass(model, batch, fc, lambda, grads, scr);
  return grads;
}

template <typename S>
double gradient_check(const Model<S>& model, const EncodedBatch& batch,
                      double lambda, double epsilon, int coords,
                      std::uint64_t seed) {
  Model<S> m = model;
  Params<S> grads = compute_gradients(m, batch, lambda);

  std::vector<Tensor<S>*> param_tensors, grad_tensors;
  m.params.for_each([&](Tensor<S>& t) { param_tensors.push_back(&t); });
  grads.for_each([&](Tensor<S>& t) { grad_tensors.push_back(&t); });
  std::size_t total = 0;
  for (auto* t : param_tensors) total += t->size();

  Rng rng(seed);
  Scratch<S> scr;
  double max_rel = 0.0;
  for (int c = 0; c < coords; ++c) {
    std::size_t flat = rng.uniform_index(total);
    std::size_t ti = 0;
    while (flat >= param_tensors[ti]->size()) {
      flat -= param_tensors[ti]->size();
      ++ti;
    }
    S& coord = param_tensors[ti]->v[flat];
    const S original = coord;

    ForwardCache<S> fc;
    coord = original + static_cast<S>(epsilon);
    forward_pass(m, batch, lambda, nullptr, fc, scr);
    double plus = fc.loss.combined;
    coord = original - static_cast<S>(epsilon);
    forward_pass(m, batch, lambda, nullptr, fc, scr);
    double minus = fc.loss.combined;
    coord = original;

    double fd = (plus - minus) / (2.0 * epsilon);
    double an = static_cast<double>(grad_tensors[ti]->v[flat]);
    double rel = std::fabs(an - fd) / (std::max(std::fabs(an), std::fabs(fd)) + 1e-4);
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

// ---------------------------------------------------------------------------
// Checkpointing
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'U', 'N', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

void put_i32(std::ostream& out, std::int32_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
}

void put_f32(std::ostream& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void put_f64(std::ostream& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

[[noreturn]] void truncated(const std::filesystem::path& path) {
  throw Error("corrupt or truncated checkpoint: " + path.string());
}

std::uint32_t get_u32(std::istream& in, const std::filesystem::path& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) truncated(path);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& in, const std::filesystem::path& path) {
  std::uint64_t lo = get_u32(in, path);
  std::uint64_t hi = get_u32(in, path);
  return lo | (hi << 32);
}

std::int32_t get_i32(std::istream& in, const std::filesystem::path& path) {
  return static_cast<std::int32_t>(get_u32(in, path));
}

float get_f32(std::istream& in, const std::filesystem::path& path) {
  return std::bit_cast<float>(get_u32(in, path));
}

double get_f64(std::istream& in, const std::filesystem::path& path) {
  return std::bit_cast<double>(get_u64(in, path));
}

std::string get_string(std::istream& in, const std::filesystem::path& path) {
  std::uint32_t len = get_u32(in, path);
  if (len > (1u << 24)) truncated(path);
  std::string s(len, '\0');
  if (len && !in.read(s.data(), len)) truncated(path);
  return s;
}

}  // namespace

void save_model(const ScorerModel& model, const std::filesystem::path& path,
                const FileHeader& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_string(out, meta.config_hash);
  put_u64(out, meta.seed);
  const ModelConfig& c = model.config;
  put_i32(out, c.hidden);
  put_i32(out, c.layers);
  put_i32(out, c.heads);
  put_i32(out, c.ffn);
  put_i32(out, c.max_len);
  put_i32(out, c.vocab);
  put_f64(out, c.lambda);
  put_f64(out, c.dropout);
  put_u32(out, static_cast<std::uint32_t>(model.vocab.size()));
  for (const auto& tok : model.vocab.tokens()) put_string(out, tok);
  model.params.for_each([&](const Tensor<float>& t) {
    put_u64(out, t.size());
    for (float v : t.v) put_f32(out, v);
  });
  if (!out) throw Error("write failed: " + path.string());
}

ScorerModel load_model(const std::filesystem::path& path, FileHeader* meta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw Error("not a scorer checkpoint (bad magic): " + path.string());
  std::uint32_t version = get_u32(in, path);
  if (version != kVersion)
    throw Error("unsupported checkpoint version " + std::to_string(version) +
                ": " + path.string());
  FileHeader header;
  header.config_hash = get_string(in, path);
  header.seed = get_u64(in, path);
  if (meta) *meta = header;

  ModelConfig cfg;
  cfg.hidden = get_i32(in, path);
  cfg.layers = get_i32(in, path);
  cfg.heads = get_i32(in, path);
  cfg.ffn = get_i32(in, path);
  cfg.max_len = get_i32(in, path);
  cfg.vocab = get_i32(in, path);
  cfg.lambda = get_f64(in, path);
  cfg.dropout = get_f64(in, path);
  cfg.validate();

  std::uint32_t count = get_u32(in, path);
  if (count != static_cast<std::uint32_t>(cfg.vocab)) truncated(path);
  if (count < Vocab::kReserved) truncated(path);
  std::vector<std::string> tokens;
  tokens.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) tokens.push_back(get_string(in, path));
  for (std::size_t i = 0; i < Vocab::kReserved; ++i)
    if (tokens[i] != Vocab().token(static_cast<std::int32_t>(i))) truncated(path);

  ScorerModel model;
  model.config = cfg;
  model.vocab = Vocab(std::vector<std::string>(tokens.begin() + Vocab::kReserved,
                                               tokens.end()));
  model.params.init_shapes(cfg);
  model.params.for_each([&](Tensor<float>& t) {
    std::uint64_t numel = get_u64(in, path);
    if (numel != t.size()) truncated(path);
    for (auto& v : t.v) v = get_f32(in, path);
  });
  in.peek();
  if (!in.eof()) throw Error("trailing bytes in checkpoint: " + path.string());
  return model;
}

ScorerModel load_model(const std::filesystem::path& path,
                       const ModelConfig& expected, FileHeader* meta) {
  ScorerModel model = load_model(path, meta);
  ModelConfig want = expected;
  want.vocab = model.config.vocab;  // vocab size is owned by the checkpoint
  if (!(model.config == want))
    throw Error("checkpoint configuration mismatch: " + path.string());
  return model;
}

// ---------------------------------------------------------------------------
// Explicit instantiations
// ---------------------------------------------------------------------------

template struct Params<float>;
template struct Params<double>;
template struct Model<float>;
template struct Model<double>;

template EncodeOutput encode<float>(const Model<float>&,
                                    std::span<const std::int32_t>,
                                    std::span<const std::uint8_t>);
template EncodeOutput encode<double>(const Model<double>&,
                                     std::span<const std::int32_t>,
                                     std::span<const std::uint8_t>);
template double score<float>(const Model<float>&, std::span<const std::int32_t>,
                             std::span<const std::uint8_t>);
template double score<double>(const Model<double>&,
                              std::span<const std::int32_t>,
                              std::span<const std::uint8_t>);
template std::vector<double> reconstruction_distributions<float>(
    const Model<float>&, std::span<const std::int32_t>,
    std::span<const std::uint8_t>);
template std::vector<double> reconstruction_distributions<double>(
    const Model<double>&, std::span<const std::int32_t>,
    std::span<const std::uint8_t>);
template LossBreakdown combined_loss<float>(const Model<float>&,
                                            const EncodedBatch&, double);
template LossBreakdown combined_loss<double>(const Model<double>&,
                                             const EncodedBatch&, double);
template double score_story<float>(const Model<float>&, const Story&);
template double score_story<double>(const Model<double>&, const Story&);
template Params<float> compute_gradients<float>(const Model<float>&,
                                                const EncodedBatch&, double);
template Params<double> compute_gradients<double>(const Model<double>&,
                                                  const EncodedBatch&, double);
template double gradient_check<float>(const Model<float>&, const EncodedBatch&,
                                      double, double, int, std::uint64_t);
template double gradient_check<double>(const Model<double>&,
                                       const EncodedBatch&, double, double, int,
                                       std::uint64_t);

}  // namespace storyeval
