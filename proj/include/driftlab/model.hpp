// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Desk-scale acoustic CTC model and d-vector speaker model. Both share a
// small tanh-RNN encoder, fully hand-differentiated: exact gradients to
// parameters (training) and to the input features (attack chain).

#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "driftlab/audio.hpp"
#include "driftlab/common.hpp"
#include "driftlab/ctc.hpp"
#include "driftlab/features.hpp"
#include "driftlab/manifest.hpp"
#include "driftlab/mat.hpp"

namespace driftlab {

// u_t = tanh(W_in x_t + b_in); h_t = tanh(W_x u_t + W_h h_{t-1} + b_h)
struct RnnEncoder {
  Matrix w_in;               // H x n_mels
  std::vector<double> b_in;  // H
  Matrix w_x;                // H x H
  Matrix w_h;                // H x H
  std::vector<double> b_h;   // H

  std::size_t hidden() const { return w_x.rows; }
  std::size_t n_mels() const { return w_in.cols; }
};

struct EncoderCache {
  Matrix x;  // frames x n_mels
  Matrix u;  // frames x H, post-tanh
  Matrix h;  // frames x H, post-tanh
  bool valid = false;
};

struct EncoderGrads {
  Matrix w_in;
  std::vector<double> b_in;
  Matrix w_x;
  Matrix w_h;
  std::vector<double> b_h;
};

namespace detail {

inline void rng_fill_normal(Matrix& m, std::mt19937_64& rng, double sigma) {
  std::normal_distribution<double> dist(0.0, sigma);
  for (double& v : m.data) v = dist(rng);
}

inline void encoder_init(RnnEncoder& enc, std::size_t n_mels, std::size_t hidden,
                         std::mt19937_64& rng) {
  enc.w_in = Matrix(hidden, n_mels);
  enc.b_in.assign(hidden, 0.0);
  enc.w_x = Matrix(hidden, hidden);
  enc.w_h = Matrix(hidden, hidden);
  enc.b_h.assign(hidden, 0.0);
  // log-mel inputs are large-magnitude; a small input scale keeps the
  // first tanh out of saturation at init
  rng_fill_normal(enc.w_in, rng, 0.05);
  double s = 1.0 / std::sqrt(static_cast<double>(hidden));
  rng_fill_normal(enc.w_x, rng, s);
  rng_fill_normal(enc.w_h, rng, s);
}

inline EncoderGrads encoder_grads_like(const RnnEncoder& enc) {
  EncoderGrads g;
  g.w_in = Matrix(enc.w_in.rows, enc.w_in.cols);
  g.b_in.assign(enc.b_in.size(), 0.0);
  g.w_x = Matrix(enc.w_x.rows, enc.w_x.cols);
  g.w_h = Matrix(enc.w_h.rows, enc.w_h.cols);
  g.b_h.assign(enc.b_h.size(), 0.0);
  return g;
}

inline void encoder_grads_zero(EncoderGrads& g) {
  g.w_in.fill(0.0);
  std::fill(g.b_in.begin(), g.b_in.end(), 0.0);
  g.w_x.fill(0.0);
  g.w_h.fill(0.0);
  std::fill(g.b_h.begin(), g.b_h.end(), 0.0);
}

inline void encoder_forward(const RnnEncoder& enc, const Matrix& x,
                            EncoderCache& cache) {
  const std::size_t T = x.rows;
  const std::size_t H = enc.hidden();
  if (x.cols != enc.n_mels())
    throw ContractError("encoder: feature width does not match model");
  cache.x = x;
  cache.u = Matrix(T, H);
  cache.h = Matrix(T, H);
  std::vector<double> pre(H);
  for (std::size_t t = 0; t < T; ++t) {
    std::copy(enc.b_in.begin(), enc.b_in.end(), pre.begin());
    matvec_acc(enc.w_in, x.row(t), pre.data());
    for (std::size_t i = 0; i < H; ++i) cache.u(t, i) = std::tanh(pre[i]);
    std::copy(enc.b_h.begin(), enc.b_h.end(), pre.begin());
    matvec_acc(enc.w_x, cache.u.row(t), pre.data());
    if (t > 0) matvec_acc(enc.w_h, cache.h.row(t - 1), pre.data());
    for (std::size_t i = 0; i < H; ++i) cache.h(t, i) = std::tanh(pre[i]);
  }
  cache.valid = true;
}

// BPTT. grad_h is consumed in place; dx may be null when only parameter
// gradients are wanted, grads may be null when only input gradients are.
inline void encoder_backward(const RnnEncoder& enc, const EncoderCache& cache,
                             Matrix& grad_h, EncoderGrads* grads, Matrix* dx) {
  if (!cache.valid) throw ContractError("encoder backward: cache missing");
  const std::size_t T = cache.h.rows;
  const std::size_t H = enc.hidden();
  if (dx) *dx = Matrix(T, enc.n_mels());
  std::vector<double> dpre_h(H), du(H), dpre_u(H);
  for (std::size_t t = T; t-- > 0;) {
    for (std::size_t i = 0; i < H; ++i) {
      double h = cache.h(t, i);
      dpre_h[i] = (1.0 - h * h) * grad_h(t, i);
    }
    if (grads) {
      for (std::size_t i = 0; i < H; ++i) grads->b_h[i] += dpre_h[i];
      outer_acc(grads->w_x, dpre_h.data(), cache.u.row(t));
      if (t > 0) outer_acc(grads->w_h, dpre_h.data(), cache.h.row(t - 1));
    }
    if (t > 0) matvec_t_acc(enc.w_h, dpre_h.data(), grad_h.row(t - 1));
    std::fill(du.begin(), du.end(), 0.0);
    matvec_t_acc(enc.w_x, dpre_h.data(), du.data());
    for (std::size_t i = 0; i < H; ++i) {
      double u = cache.u(t, i);
      dpre_u[i] = (1.0 - u * u) * du[i];
    }
    if (grads) {
      for (std::size_t i = 0; i < H; ++i) grads->b_in[i] += dpre_u[i];
      outer_acc(grads->w_in, dpre_u.data(), cache.x.row(t));
    }
    if (dx) matvec_t_acc(enc.w_in, dpre_u.data(), dx->row(t));
  }
}

}  // namespace detail

// ---------------------------------------------------------------- ASR

struct AcousticModel {
  RnnEncoder enc;
  Matrix w_out;               // (V+1) x H
  std::vector<double> b_out;  // V+1
  Vocabulary vocab;
  FrontendConfig frontend;
  std::uint64_t seed = 0;

  std::size_t hidden() const { return enc.hidden(); }
  std::size_t n_mels() const { return enc.n_mels(); }

  static AcousticModel init(std::size_t n_mels, std::size_t hidden,
                            Vocabulary vocab, FrontendConfig frontend,
                            std::uint64_t seed) {
    AcousticModel m;
    m.vocab = std::move(vocab);
    m.frontend = frontend;
    m.seed = seed;
    std::mt19937_64 rng(seed);
    detail::encoder_init(m.enc, n_mels, hidden, rng);
    std::size_t v1 = static_cast<std::size_t>(m.vocab.size()) + 1;
    m.w_out = Matrix(v1, hidden);
    m.b_out.assign(v1, 0.0);
    detail::rng_fill_normal(m.w_out, rng, 1.0 / std::sqrt(static_cast<double>(hidden)));
    return m;
  }
};

struct AsrParamGrads {
  EncoderGrads enc;
  Matrix w_out;
  std::vector<double> b_out;

  static AsrParamGrads like(const AcousticModel& m) {
    AsrParamGrads g;
    g.enc = detail::encoder_grads_like(m.enc);
    g.w_out = Matrix(m.w_out.rows, m.w_out.cols);
    g.b_out.assign(m.b_out.size(), 0.0);
    return g;
  }
  void zero() {
    detail::encoder_grads_zero(enc);
    w_out.fill(0.0);
    std::fill(b_out.begin(), b_out.end(), 0.0);
  }
};

inline LogitMatrix asr_forward(const AcousticModel& m, const FeatureMatrix& fm,
                               EncoderCache* cache = nullptr) {
  EncoderCache local;
  EncoderCache& c = cache ? *cache : local;
  detail::encoder_forward(m.enc, fm.values, c);
  const std::size_t T = c.h.rows;
  const std::size_t V1 = m.w_out.rows;
  LogitMatrix out;
  out.vocab = m.vocab;
  out.values = Matrix(T, V1);
  for (std::size_t t = 0; t < T; ++t) {
    double* row = out.values.row(t);
    std::copy(m.b_out.begin(), m.b_out.end(), row);
    matvec_acc(m.w_out, c.h.row(t), row);
  }
  return out;
}

// Exact gradient of the logit-level objective with respect to the input
// features; optionally also accumulates parameter gradients.
inline Matrix asr_backward_to_features(const AcousticModel& m,
                                       const EncoderCache& cache,
                                       const Matrix& grad_logits,
                                       AsrParamGrads* grads = nullptr) {
  if (!cache.valid) throw ContractError("asr backward: forward cache missing");
  if (grad_logits.rows != cache.h.rows || grad_logits.cols != m.w_out.rows)
    throw ContractError("asr backward: grad_logits shape mismatch");
  const std::size_t T = cache.h.rows;
  Matrix grad_h(T, m.hidden());
  for (std::size_t t = 0; t < T; ++t) {
    matvec_t_acc(m.w_out, grad_logits.row(t), grad_h.row(t));
    if (grads) {
      outer_acc(grads->w_out, grad_logits.row(t), cache.h.row(t));
      for (std::size_t k = 0; k < m.b_out.size(); ++k)
        grads->b_out[k] += grad_logits(t, k);
    }
  }
  Matrix dx;
  detail::encoder_backward(m.enc, cache, grad_h, grads ? &grads->enc : nullptr,
                           &dx);
  return dx;
}

// ---------------------------------------------------------------- SID

struct Embedding {
  std::vector<double> v;
  double norm = 0.0;
};

struct SpeakerModel {
  RnnEncoder enc;
  Matrix w_embed;               // D x H
  std::vector<double> b_embed;  // D
  Matrix w_head;                // n_speakers x D, training only
  std::vector<double> b_head;
  std::vector<std::string> speaker_ids;  // class order of the head
  FrontendConfig frontend;
  std::uint64_t seed = 0;

  std::size_t hidden() const { return enc.hidden(); }
  std::size_t n_mels() const { return enc.n_mels(); }
  std::size_t embed_dim() const { return w_embed.rows; }

  static SpeakerModel init(std::size_t n_mels, std::size_t hidden,
                           std::size_t embed_dim,
                           std::vector<std::string> speaker_ids,
                           FrontendConfig frontend, std::uint64_t seed) {
    if (embed_dim < 2) throw ConfigError("speaker model: embed_dim must be >= 2");
    SpeakerModel m;
    m.frontend = frontend;
    m.seed = seed;
    m.speaker_ids = std::move(speaker_ids);
    std::mt19937_64 rng(seed);
    detail::encoder_init(m.enc, n_mels, hidden, rng);
    m.w_embed = Matrix(embed_dim, hidden);
    m.b_embed.assign(embed_dim, 0.0);
    detail::rng_fill_normal(m.w_embed, rng,
                            1.0 / std::sqrt(static_cast<double>(hidden)));
    m.w_head = Matrix(m.speaker_ids.size(), embed_dim);
    m.b_head.assign(m.speaker_ids.size(), 0.0);
    detail::rng_fill_normal(m.w_head, rng,
                            1.0 / std::sqrt(static_cast<double>(embed_dim)));
    return m;
  }
};

// Mean-over-time pooling of the recurrent state, projected to D. The
// classification head is deliberately not applied here.
inline Embedding sid_embed(const SpeakerModel& m, const FeatureMatrix& fm,
                           EncoderCache* cache = nullptr) {
  if (fm.values.rows == 0)
    throw DegenerateInputError("sid_embed: empty feature matrix");
  EncoderCache local;
  EncoderCache& c = cache ? *cache : local;
  detail::encoder_forward(m.enc, fm.values, c);
  const std::size_t T = c.h.rows;
  const std::size_t H = m.hidden();
  std::vector<double> pooled(H, 0.0);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < H; ++i) pooled[i] += c.h(t, i);
  for (double& p : pooled) p /= static_cast<double>(T);
  Embedding e;
  e.v.assign(m.b_embed.begin(), m.b_embed.end());
  matvec_acc(m.w_embed, pooled.data(), e.v.data());
  double n2 = 0.0;
  for (double x : e.v) n2 += x * x;
  e.norm = std::sqrt(n2);
  if (!(e.norm > 0.0))
    throw DegenerateInputError("sid_embed: zero-norm embedding");
  return e;
}

// ---------------------------------------------------------------- Adam

struct TrainConfig {
  int epochs = 200;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 5.0;
  int hidden = 64;
  int embed_dim = 32;
  std::uint64_t seed = 1;
};

using ParamViews = std::vector<std::pair<double*, std::size_t>>;

inline ParamViews encoder_views(RnnEncoder& e) {
  return {{e.w_in.data.data(), e.w_in.data.size()},
          {e.b_in.data(), e.b_in.size()},
          {e.w_x.data.data(), e.w_x.data.size()},
          {e.w_h.data.data(), e.w_h.data.size()},
          {e.b_h.data(), e.b_h.size()}};
}

inline ParamViews encoder_views(EncoderGrads& g) {
  return {{g.w_in.data.data(), g.w_in.data.size()},
          {g.b_in.data(), g.b_in.size()},
          {g.w_x.data.data(), g.w_x.data.size()},
          {g.w_h.data.data(), g.w_h.data.size()},
          {g.b_h.data(), g.b_h.size()}};
}

class Adam {
 public:
  Adam(double lr, double beta1, double beta2, double eps, double clip_norm)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), clip_norm_(clip_norm) {}

  explicit Adam(const TrainConfig& cfg)
      : Adam(cfg.lr, cfg.beta1, cfg.beta2, cfg.eps, cfg.clip_norm) {}

  // One update over matching parameter/gradient views. Gradients are
  // clipped by global L2 norm before entering the moment estimates.
  void step(const ParamViews& params, const ParamViews& grads) {
    std::size_t total = 0;
    for (const auto& [_, n] : params) total += n;
    if (m_.empty()) {
      m_.assign(total, 0.0);
      v_.assign(total, 0.0);
    }
    if (m_.size() != total) throw ContractError("adam: parameter set changed");

    double norm2 = 0.0;
    for (const auto& [g, n] : grads)
      for (std::size_t i = 0; i < n; ++i) norm2 += g[i] * g[i];
    double scale = 1.0;
    double norm = std::sqrt(norm2);
    if (clip_norm_ > 0.0 && norm > clip_norm_) scale = clip_norm_ / norm;

    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, t_);
    double bc2 = 1.0 - std::pow(beta2_, t_);
    std::size_t off = 0;
    for (std::size_t k = 0; k < params.size(); ++k) {
      double* p = params[k].first;
      const double* g = grads[k].first;
      std::size_t n = params[k].second;
      for (std::size_t i = 0; i < n; ++i) {
        double gi = g[i] * scale;
        m_[off + i] = beta1_ * m_[off + i] + (1.0 - beta1_) * gi;
        v_[off + i] = beta2_ * v_[off + i] + (1.0 - beta2_) * gi * gi;
        double mh = m_[off + i] / bc1;
        double vh = v_[off + i] / bc2;
        p[i] -= lr_ * mh / (std::sqrt(vh) + eps_);
      }
      off += n;
    }
  }

 private:
  double lr_, beta1_, beta2_, eps_, clip_norm_;
  long t_ = 0;
  std::vector<double> m_, v_;
};

// ---------------------------------------------------------------- training

struct AsrCurvePoint {
  int epoch;
  double loss;
};

struct TrainedAsr {
  AcousticModel model;
  std::vector<AsrCurvePoint> curve;
};

namespace detail {

struct PreparedUtt {
  FeatureMatrix fm;
  Transcript transcript;
  std::string speaker_id;
  std::string utt_id;
};

inline std::vector<PreparedUtt> prepare_corpus(
    const std::vector<ManifestRow>& rows, const Frontend& frontend,
    const Vocabulary* vocab_for_asr) {
  if (rows.empty()) throw DataError("training corpus is empty");
  std::vector<PreparedUtt> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    PreparedUtt p;
    p.utt_id = r.utt_id;
    p.speaker_id = r.speaker_id;
    Waveform w = read_wav(r.wav_path);
    p.fm = frontend.forward(w);
    p.fm.spectra.clear();  // waveform gradients are not needed in training
    if (vocab_for_asr) {
      try {
        p.transcript = Transcript::from_text(r.transcript, *vocab_for_asr);
      } catch (const DataError& e) {
        throw DataError("utt '" + r.utt_id + "': " + e.what());
      }
      if (!ctc_feasible(p.fm.frames(), p.transcript.labels))
        throw DataError("utt '" + r.utt_id +
                        "': transcript not CTC-feasible for its frame count");
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

inline TrainedAsr train_asr(const std::vector<ManifestRow>& corpus,
                            const TrainConfig& cfg,
                            const FrontendConfig& frontend_cfg,
                            const Vocabulary& vocab, int sample_rate_hz = 16000) {
  Frontend frontend(frontend_cfg, sample_rate_hz);
  auto items = detail::prepare_corpus(corpus, frontend, &vocab);

  TrainedAsr out;
  out.model = AcousticModel::init(static_cast<std::size_t>(frontend_cfg.n_mels),
                                  static_cast<std::size_t>(cfg.hidden), vocab,
                                  frontend_cfg, cfg.seed);
  AcousticModel& m = out.model;
  AsrParamGrads grads = AsrParamGrads::like(m);
  Adam adam(cfg);
  ParamViews pv = encoder_views(m.enc);
  pv.push_back({m.w_out.data.data(), m.w_out.data.size()});
  pv.push_back({m.b_out.data(), m.b_out.size()});
  ParamViews gv = encoder_views(grads.enc);
  gv.push_back({grads.w_out.data.data(), grads.w_out.data.size()});
  gv.push_back({grads.b_out.data(), grads.b_out.size()});

  EncoderCache cache;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    for (const auto& item : items) {
      LogitMatrix logits = asr_forward(m, item.fm, &cache);
      CtcResult res = ctc_loss(logits, item.transcript);
      loss_sum += res.loss;
      grads.zero();
      asr_backward_to_features(m, cache, res.grad, &grads);
      adam.step(pv, gv);
    }
    out.curve.push_back({epoch, loss_sum / static_cast<double>(items.size())});
  }
  return out;
}

struct SidCurvePoint {
  int epoch;
  double loss;
  double accuracy;  // training accuracy
};

struct TrainedSid {
  SpeakerModel model;
  std::vector<SidCurvePoint> curve;
};

inline TrainedSid train_sid(const std::vector<ManifestRow>& corpus,
                            const TrainConfig& cfg,
                            const FrontendConfig& frontend_cfg,
                            int sample_rate_hz = 16000) {
  Frontend frontend(frontend_cfg, sample_rate_hz);
  auto items = detail::prepare_corpus(corpus, frontend, nullptr);

  std::map<std::string, int> counts;
  for (const auto& it : items) counts[it.speaker_id]++;
  if (counts.size() < 2)
    throw DataError("speaker training needs at least 2 speakers");
  for (const auto& [spk, n] : counts)
    if (n < 2)
      throw DataError("speaker '" + spk + "' has fewer than 2 utterances");
  std::vector<std::string> speakers;
  for (const auto& [spk, _] : counts) speakers.push_back(spk);

  TrainedSid out;
  out.model = SpeakerModel::init(static_cast<std::size_t>(frontend_cfg.n_mels),
                                 static_cast<std::size_t>(cfg.hidden),
                                 static_cast<std::size_t>(cfg.embed_dim),
                                 speakers, frontend_cfg, cfg.seed);
  SpeakerModel& m = out.model;
  std::map<std::string, std::size_t> class_of;
  for (std::size_t i = 0; i < speakers.size(); ++i) class_of[speakers[i]] = i;

  EncoderGrads enc_g = detail::encoder_grads_like(m.enc);
  Matrix g_embed(m.w_embed.rows, m.w_embed.cols);
  std::vector<double> g_b_embed(m.b_embed.size());
  Matrix g_head(m.w_head.rows, m.w_head.cols);
  std::vector<double> g_b_head(m.b_head.size());

  Adam adam(cfg);
  ParamViews pv = encoder_views(m.enc);
  pv.push_back({m.w_embed.data.data(), m.w_embed.data.size()});
  pv.push_back({m.b_embed.data(), m.b_embed.size()});
  pv.push_back({m.w_head.data.data(), m.w_head.data.size()});
  pv.push_back({m.b_head.data(), m.b_head.size()});
  ParamViews gv = encoder_views(enc_g);
  gv.push_back({g_embed.data.data(), g_embed.data.size()});
  gv.push_back({g_b_embed.data(), g_b_embed.size()});
  gv.push_back({g_head.data.data(), g_head.data.size()});
  gv.push_back({g_b_head.data(), g_b_head.size()});

  const std::size_t H = m.hidden();
  const std::size_t D = m.embed_dim();
  const std::size_t C = speakers.size();
  EncoderCache cache;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (const auto& item : items) {
      Embedding e = sid_embed(m, item.fm, &cache);
      const std::size_t T = cache.h.rows;
      std::vector<double> logits(m.b_head.begin(), m.b_head.end());
      matvec_acc(m.w_head, e.v.data(), logits.data());
      std::size_t truth = class_of[item.speaker_id];
      double mx = *std::max_element(logits.begin(), logits.end());
      double z = 0.0;
      for (double l : logits) z += std::exp(l - mx);
      double log_z = mx + std::log(z);
      loss_sum += log_z - logits[truth];
      std::size_t arg = static_cast<std::size_t>(
          std::max_element(logits.begin(), logits.end()) - logits.begin());
      if (arg == truth) ++correct;

      // backward: softmax CE -> head -> embedding -> mean pool -> encoder
      detail::encoder_grads_zero(enc_g);
      g_embed.fill(0.0);
      std::fill(g_b_embed.begin(), g_b_embed.end(), 0.0);
      g_head.fill(0.0);
      std::fill(g_b_head.begin(), g_b_head.end(), 0.0);

      std::vector<double> dlogit(C);
      for (std::size_t c = 0; c < C; ++c)
        dlogit[c] = std::exp(logits[c] - log_z) - (c == truth ? 1.0 : 0.0);
      outer_acc(g_head, dlogit.data(), e.v.data());
      for (std::size_t c = 0; c < C; ++c) g_b_head[c] += dlogit[c];
      std::vector<double> de(D, 0.0);
      matvec_t_acc(m.w_head, dlogit.data(), de.data());

      std::vector<double> pooled(H, 0.0);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < H; ++i) pooled[i] += cache.h(t, i);
      for (double& p : pooled) p /= static_cast<double>(T);
      outer_acc(g_embed, de.data(), pooled.data());
      for (std::size_t d = 0; d < D; ++d) g_b_embed[d] += de[d];

      std::vector<double> dpool(H, 0.0);
      matvec_t_acc(m.w_embed, de.data(), dpool.data());
      Matrix grad_h(T, H);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t i = 0; i < H; ++i)
          grad_h(t, i) = dpool[i] / static_cast<double>(T);
      detail::encoder_backward(m.enc, cache, grad_h, &enc_g, nullptr);
      adam.step(pv, gv);
    }
    out.curve.push_back({epoch, loss_sum / static_cast<double>(items.size()),
                         static_cast<double>(correct) /
                             static_cast<double>(items.size())});
  }
  return out;
}

// ---------------------------------------------------------------- curves

inline void write_asr_curve(const std::vector<AsrCurvePoint>& curve,
                            const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write curve: " + path);
  out << "epoch,loss\n";
  char buf[64];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%d,%.9f\n", p.epoch, p.loss);
    out << buf;
  }
}

inline void write_sid_curve(const std::vector<SidCurvePoint>& curve,
                            const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write curve: " + path);
  out << "epoch,loss,accuracy\n";
  char buf[96];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%d,%.9f,%.6f\n", p.epoch, p.loss, p.accuracy);
    out << buf;
  }
}

}  // namespace driftlab
