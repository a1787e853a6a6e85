// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "driftlab/model.hpp"
#include "driftlab/model_io.hpp"
#include "driftlab/synth.hpp"
#include "oracles.hpp"

using namespace driftlab;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "driftlab_model_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

FeatureMatrix fake_features(std::size_t frames, std::size_t n_mels,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  FeatureMatrix fm;
  fm.values = Matrix(frames, n_mels);
  for (double& v : fm.values.data) v = dist(rng);
  return fm;
}

Vocabulary tiny_vocab() { return Vocabulary{"ab"}; }

// one utterance rendered to disk plus its manifest row
ManifestRow synth_row(const std::string& utt_id, const std::string& speaker,
                      const std::string& text, double f0_factor, double tilt,
                      std::uint64_t seed) {
  SynthConfig cfg;
  cfg.seed = seed;
  Waveform w = render_utterance(text, {f0_factor, tilt}, cfg, seed);
  std::string path = (work_dir() / (utt_id + ".wav")).string();
  write_wav(w, path);
  return {utt_id, speaker, path, text};
}

}  // namespace

TEST_CASE("zero weights leave only the output bias", "[model]") {
  AcousticModel m = AcousticModel::init(8, 4, tiny_vocab(), FrontendConfig{}, 1);
  m.enc.w_in.fill(0.0);
  m.enc.w_x.fill(0.0);
  m.enc.w_h.fill(0.0);
  m.w_out.fill(0.0);
  m.b_out = {0.5, -1.0, 2.0};
  FeatureMatrix fm = fake_features(5, 8, 2);
  LogitMatrix logits = asr_forward(m, fm);
  REQUIRE(logits.values.rows == 5);
  REQUIRE(logits.values.cols == 3);
  for (std::size_t t = 0; t < 5; ++t) {
    CHECK(logits.values(t, 0) == 0.5);
    CHECK(logits.values(t, 1) == -1.0);
    CHECK(logits.values(t, 2) == 2.0);
  }
}

TEST_CASE("forward is deterministic and finite", "[model]") {
  AcousticModel a = AcousticModel::init(8, 16, tiny_vocab(), FrontendConfig{}, 9);
  AcousticModel b = AcousticModel::init(8, 16, tiny_vocab(), FrontendConfig{}, 9);
  FeatureMatrix fm = fake_features(7, 8, 3);
  LogitMatrix la = asr_forward(a, fm);
  LogitMatrix lb = asr_forward(b, fm);
  CHECK(la.values.data == lb.values.data);
  for (double v : la.values.data) CHECK(std::isfinite(v));
}

TEST_CASE("feature-width mismatch is a contract error", "[model]") {
  AcousticModel m = AcousticModel::init(8, 4, tiny_vocab(), FrontendConfig{}, 1);
  FeatureMatrix fm = fake_features(3, 9, 4);
  CHECK_THROWS_AS(asr_forward(m, fm), ContractError);
}

TEST_CASE("input gradient matches finite differences", "[model]") {
  AcousticModel m = AcousticModel::init(6, 8, tiny_vocab(), FrontendConfig{}, 17);
  FeatureMatrix fm = fake_features(3, 6, 18);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  EncoderCache cache;
  LogitMatrix logits = asr_forward(m, fm, &cache);
  Matrix grad_logits(logits.values.rows, logits.values.cols);
  for (double& v : grad_logits.data) v = dist(rng);

  SECTION("zero upstream gradient") {
    Matrix zeros(logits.values.rows, logits.values.cols);
    Matrix dx = asr_backward_to_features(m, cache, zeros);
    for (double v : dx.data) CHECK(v == 0.0);
  }

  SECTION("finite differences") {
    Matrix dx = asr_backward_to_features(m, cache, grad_logits);
    auto objective = [&](const std::vector<double>& flat) {
      FeatureMatrix probe = fm;
      probe.values.data = flat;
      LogitMatrix out = asr_forward(m, probe);
      double acc = 0.0;
      for (std::size_t i = 0; i < out.values.data.size(); ++i)
        acc += grad_logits.data[i] * out.values.data[i];
      return acc;
    };
    auto numeric = oracles::central_diff(objective, fm.values.data, 1e-5);
    CHECK(oracles::max_rel_err(dx.data, numeric) < 1e-4);
  }

  SECTION("missing cache is a contract error") {
    EncoderCache empty;
    CHECK_THROWS_AS(asr_backward_to_features(m, empty, grad_logits),
                    ContractError);
  }
}

TEST_CASE("parameter gradients match finite differences", "[model]") {
  AcousticModel m = AcousticModel::init(5, 6, tiny_vocab(), FrontendConfig{}, 23);
  FeatureMatrix fm = fake_features(4, 5, 24);
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  EncoderCache cache;
  LogitMatrix logits = asr_forward(m, fm, &cache);
  Matrix grad_logits(logits.values.rows, logits.values.cols);
  for (double& v : grad_logits.data) v = dist(rng);

  AsrParamGrads grads = AsrParamGrads::like(m);
  grads.zero();
  asr_backward_to_features(m, cache, grad_logits, &grads);

  auto objective_now = [&]() {
    LogitMatrix out = asr_forward(m, fm);
    double acc = 0.0;
    for (std::size_t i = 0; i < out.values.data.size(); ++i)
      acc += grad_logits.data[i] * out.values.data[i];
    return acc;
  };
  auto check_tensor = [&](std::vector<double>& param,
                          const std::vector<double>& analytic) {
    auto objective = [&](const std::vector<double>& flat) {
      std::vector<double> keep = param;
      param = flat;
      double v = objective_now();
      param = keep;
      return v;
    };
    auto numeric = oracles::central_diff(objective, param, 1e-5);
    CHECK(oracles::max_rel_err(analytic, numeric) < 1e-4);
  };
  check_tensor(m.enc.w_h.data, grads.enc.w_h.data);
  check_tensor(m.enc.w_in.data, grads.enc.w_in.data);
  check_tensor(m.w_out.data, grads.w_out.data);
  check_tensor(m.b_out, grads.b_out);
}

TEST_CASE("zeroed recurrence factorizes per frame", "[model]") {
  AcousticModel m = AcousticModel::init(6, 8, tiny_vocab(), FrontendConfig{}, 29);
  m.enc.w_h.fill(0.0);
  FeatureMatrix fm = fake_features(3, 6, 30);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  EncoderCache cache;
  LogitMatrix logits = asr_forward(m, fm, &cache);
  Matrix grad_logits(logits.values.rows, logits.values.cols);
  for (double& v : grad_logits.data) v = dist(rng);
  Matrix joint = asr_backward_to_features(m, cache, grad_logits);

  for (std::size_t t = 0; t < 3; ++t) {
    FeatureMatrix one;
    one.values = Matrix(1, 6);
    for (std::size_t c = 0; c < 6; ++c) one.values(0, c) = fm.values(t, c);
    EncoderCache c1;
    asr_forward(m, one, &c1);
    Matrix g1(1, grad_logits.cols);
    for (std::size_t c = 0; c < grad_logits.cols; ++c)
      g1(0, c) = grad_logits(t, c);
    Matrix dx1 = asr_backward_to_features(m, c1, g1);
    for (std::size_t c = 0; c < 6; ++c)
      CHECK(joint(t, c) == Catch::Approx(dx1(0, c)).margin(1e-12));
  }
}

TEST_CASE("overfitting one utterance drives the loss down", "[model]") {
  std::vector<ManifestRow> corpus = {
      synth_row("overfit_u0", "spkA", "bag a cab", 1.0, 0.0, 101)};
  TrainConfig cfg;
  cfg.epochs = 500;
  cfg.hidden = 24;
  cfg.lr = 3e-3;
  cfg.seed = 5;
  TrainedAsr trained = train_asr(corpus, cfg, FrontendConfig{},
                                 Vocabulary::lowercase_letters_space());
  REQUIRE(trained.curve.size() == 500);
  CHECK(trained.curve.back().loss < 0.1);
  // strict descent over any 50-epoch window until the loss is tiny
  for (std::size_t k = 0; k + 50 < trained.curve.size(); ++k) {
    if (trained.curve[k].loss < 0.1) break;
    CHECK(trained.curve[k + 50].loss < trained.curve[k].loss);
  }
  // and the overfit model decodes its own training transcript
  Frontend fe(trained.model.frontend);
  FeatureMatrix fm = fe.forward(read_wav(corpus[0].wav_path));
  CHECK(greedy_decode(asr_forward(trained.model, fm)).text == "bag a cab");
}

TEST_CASE("training is reproducible from the seed", "[model]") {
  std::vector<ManifestRow> corpus = {
      synth_row("det_u0", "spkA", "dig", 1.05, -2.0, 102),
      synth_row("det_u1", "spkA", "bad", 1.05, -2.0, 103)};
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.hidden = 8;
  cfg.seed = 77;
  TrainedAsr a = train_asr(corpus, cfg, FrontendConfig{},
                           Vocabulary::lowercase_letters_space());
  TrainedAsr b = train_asr(corpus, cfg, FrontendConfig{},
                           Vocabulary::lowercase_letters_space());
  CHECK(a.model.enc.w_in.data == b.model.enc.w_in.data);
  CHECK(a.model.enc.w_h.data == b.model.enc.w_h.data);
  CHECK(a.model.w_out.data == b.model.w_out.data);
  CHECK(a.curve.back().loss == b.curve.back().loss);
}

TEST_CASE("training corpus validation", "[model]") {
  TrainConfig cfg;
  cfg.epochs = 1;
  SECTION("empty corpus") {
    CHECK_THROWS_AS(train_asr({}, cfg, FrontendConfig{},
                              Vocabulary::lowercase_letters_space()),
                    DataError);
  }
  SECTION("infeasible transcript names the item") {
    // one character of audio cannot carry a 40-label transcript
    std::vector<ManifestRow> corpus = {
        synth_row("bad_u0", "spkA", "a", 1.0, 0.0, 104)};
    corpus[0].transcript = "aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa";
    try {
      train_asr(corpus, cfg, FrontendConfig{},
                Vocabulary::lowercase_letters_space());
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("bad_u0") != std::string::npos);
    }
  }
  SECTION("transcript outside the vocabulary names the item") {
    std::vector<ManifestRow> corpus = {
        synth_row("bad_u1", "spkA", "a", 1.0, 0.0, 105)};
    corpus[0].transcript = "a?b";
    CHECK_THROWS_AS(train_asr(corpus, cfg, FrontendConfig{},
                              Vocabulary::lowercase_letters_space()),
                    DataError);
  }
}

TEST_CASE("pooling of equal per-frame states is that state", "[model]") {
  SpeakerModel m = SpeakerModel::init(6, 8, 4, {"a", "b"}, FrontendConfig{}, 41);
  m.enc.w_h.fill(0.0);  // frames become independent
  FeatureMatrix one;
  one.values = Matrix(1, 6);
  for (std::size_t c = 0; c < 6; ++c) one.values(0, c) = 0.3 * (1.0 + c);
  FeatureMatrix many;
  many.values = Matrix(5, 6);
  for (std::size_t t = 0; t < 5; ++t)
    for (std::size_t c = 0; c < 6; ++c) many.values(t, c) = one.values(0, c);
  Embedding e1 = sid_embed(m, one);
  Embedding e5 = sid_embed(m, many);
  REQUIRE(e1.v.size() == e5.v.size());
  for (std::size_t i = 0; i < e1.v.size(); ++i)
    CHECK(e5.v[i] == Catch::Approx(e1.v[i]).margin(1e-12));
}

TEST_CASE("embedding is deterministic and guarded", "[model]") {
  SpeakerModel m = SpeakerModel::init(6, 8, 4, {"a", "b"}, FrontendConfig{}, 43);
  FeatureMatrix fm = fake_features(6, 6, 44);
  Embedding a = sid_embed(m, fm);
  Embedding b = sid_embed(m, fm);
  CHECK(a.v == b.v);
  CHECK(a.norm > 0.0);

  FeatureMatrix empty;
  empty.values = Matrix(0, 6);
  CHECK_THROWS_AS(sid_embed(m, empty), DegenerateInputError);
}

TEST_CASE("two spectrally disjoint speakers separate perfectly", "[model]") {
  std::vector<ManifestRow> train = {
      synth_row("sidA_u0", "spkA", "bad bag", 0.85, -5.0, 300),
      synth_row("sidA_u1", "spkA", "dig dog", 0.85, -5.0, 301),
      synth_row("sidB_u0", "spkB", "bad bag", 1.22, 5.0, 302),
      synth_row("sidB_u1", "spkB", "dig dog", 1.22, 5.0, 303)};
  std::vector<ManifestRow> held = {
      synth_row("sidA_u2", "spkA", "go up", 0.85, -5.0, 304),
      synth_row("sidB_u2", "spkB", "go up", 1.22, 5.0, 305)};
  TrainConfig cfg;
  cfg.epochs = 60;
  cfg.hidden = 16;
  cfg.embed_dim = 8;
  cfg.seed = 7;
  TrainedSid trained = train_sid(train, cfg, FrontendConfig{});
  CHECK(trained.curve.back().accuracy == 1.0);

  Frontend fe(trained.model.frontend);
  for (const auto& row : held) {
    FeatureMatrix fm = fe.forward(read_wav(row.wav_path));
    Embedding e = sid_embed(trained.model, fm);
    std::vector<double> logits(trained.model.b_head.begin(),
                               trained.model.b_head.end());
    matvec_acc(trained.model.w_head, e.v.data(), logits.data());
    std::size_t arg = static_cast<std::size_t>(
        std::max_element(logits.begin(), logits.end()) - logits.begin());
    CHECK(trained.model.speaker_ids[arg] == row.speaker_id);
  }
}

TEST_CASE("speaker training preconditions", "[model]") {
  TrainConfig cfg;
  cfg.epochs = 1;
  SECTION("single speaker") {
    std::vector<ManifestRow> corpus = {
        synth_row("pre_u0", "spkA", "a", 1.0, 0.0, 400),
        synth_row("pre_u1", "spkA", "b", 1.0, 0.0, 401)};
    CHECK_THROWS_AS(train_sid(corpus, cfg, FrontendConfig{}), DataError);
  }
  SECTION("speaker with one utterance") {
    std::vector<ManifestRow> corpus = {
        synth_row("pre_u2", "spkA", "a", 1.0, 0.0, 402),
        synth_row("pre_u3", "spkA", "b", 1.0, 0.0, 403),
        synth_row("pre_u4", "spkB", "c", 1.2, 2.0, 404)};
    CHECK_THROWS_AS(train_sid(corpus, cfg, FrontendConfig{}), DataError);
  }
}

TEST_CASE("model files round-trip bit-exactly", "[model]") {
  AcousticModel asr = AcousticModel::init(
      40, 12, Vocabulary::lowercase_letters_space(), FrontendConfig{}, 55);
  std::string asr_path = (work_dir() / "asr.model").string();
  save_model(asr, asr_path);
  AcousticModel asr2 = load_asr_model(asr_path);
  CHECK(asr2.enc.w_in.data == asr.enc.w_in.data);
  CHECK(asr2.enc.w_x.data == asr.enc.w_x.data);
  CHECK(asr2.enc.w_h.data == asr.enc.w_h.data);
  CHECK(asr2.w_out.data == asr.w_out.data);
  CHECK(asr2.b_out == asr.b_out);
  CHECK(asr2.vocab.chars == asr.vocab.chars);
  CHECK(asr2.frontend == asr.frontend);
  CHECK(asr2.seed == asr.seed);

  SpeakerModel sid =
      SpeakerModel::init(40, 12, 8, {"s0", "s1", "s2"}, FrontendConfig{}, 56);
  std::string sid_path = (work_dir() / "sid.model").string();
  save_model(sid, sid_path);
  SpeakerModel sid2 = load_sid_model(sid_path);
  CHECK(sid2.enc.w_in.data == sid.enc.w_in.data);
  CHECK(sid2.w_embed.data == sid.w_embed.data);
  CHECK(sid2.w_head.data == sid.w_head.data);
  CHECK(sid2.speaker_ids == sid.speaker_ids);

  SECTION("truncated file is a format error") {
    auto size = fs::file_size(asr_path);
    fs::resize_file(asr_path, size / 2);
    CHECK_THROWS_AS(load_asr_model(asr_path), FormatError);
  }
  SECTION("kind mismatch is a format error") {
    CHECK_THROWS_AS(load_asr_model(sid_path), FormatError);
    CHECK_THROWS_AS(load_sid_model(asr_path), FormatError);
  }
}
