// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "driftlab/features.hpp"
#include "oracles.hpp"

using namespace driftlab;

namespace {

Waveform random_waveform(std::size_t n, std::uint64_t seed, double amp = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amp, amp);
  Waveform w;
  w.samples.resize(n);
  for (double& s : w.samples) s = dist(rng);
  return w;
}

// small config so finite differences stay cheap
FrontendConfig tiny_config() {
  FrontendConfig cfg;
  cfg.frame_len = 32;
  cfg.hop = 16;
  cfg.n_fft = 32;
  cfg.n_mels = 6;
  return cfg;
}

// replicate forward() with the naive DFT instead of the FFT
Matrix naive_forward(const Frontend& fe, const Waveform& w) {
  const FrontendConfig& cfg = fe.config();
  std::vector<double> pre(w.samples.size());
  pre[0] = w.samples[0];
  for (std::size_t t = 1; t < w.samples.size(); ++t)
    pre[t] = w.samples[t] - cfg.preemph * w.samples[t - 1];
  std::size_t frames = fe.frame_count(w.samples.size());
  Matrix out(frames, static_cast<std::size_t>(cfg.n_mels));
  for (std::size_t f = 0; f < frames; ++f) {
    std::vector<double> padded(static_cast<std::size_t>(cfg.n_fft), 0.0);
    for (int t = 0; t < cfg.frame_len; ++t)
      padded[static_cast<std::size_t>(t)] =
          pre[f * static_cast<std::size_t>(cfg.hop) + static_cast<std::size_t>(t)] *
          fe.window()[static_cast<std::size_t>(t)];
    auto spec = oracles::naive_dft(padded);
    for (int j = 0; j < cfg.n_mels; ++j) {
      double e = 0.0;
      for (std::size_t k = 0; k <= static_cast<std::size_t>(cfg.n_fft) / 2; ++k)
        e += fe.filterbank()(static_cast<std::size_t>(j), k) * std::norm(spec[k]);
      out(f, static_cast<std::size_t>(j)) = std::log(e + cfg.floor);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("all-zero waveform hits the log floor", "[features]") {
  FrontendConfig cfg;  // defaults: 400/160/512/40
  Frontend fe(cfg);
  Waveform w;
  w.samples.assign(560, 0.0);
  FeatureMatrix fm = fe.forward(w);
  REQUIRE(fm.frames() == 2);
  for (double v : fm.values.data) CHECK(v == Catch::Approx(std::log(1e-10)));
}

TEST_CASE("too-short waveform is degenerate", "[features]") {
  Frontend fe(FrontendConfig{});
  Waveform w;
  w.samples.assign(399, 0.1);
  CHECK_THROWS_AS(fe.forward(w), DegenerateInputError);
}

TEST_CASE("forward matches a straight-line DFT implementation", "[features]") {
  FrontendConfig cfg = tiny_config();
  Frontend fe(cfg, 16000);
  Waveform w = random_waveform(100, 21);
  FeatureMatrix fm = fe.forward(w);
  Matrix ref = naive_forward(fe, w);
  REQUIRE(fm.values.rows == ref.rows);
  for (std::size_t i = 0; i < ref.data.size(); ++i)
    CHECK(fm.values.data[i] == Catch::Approx(ref.data[i]).margin(1e-9));
}

TEST_CASE("pure sine peaks at its own mel filter", "[features]") {
  FrontendConfig cfg;
  Frontend fe(cfg, 16000);
  // pick a mid-range filter and synthesize its center frequency
  const int j = 20;
  double f0 = fe.filter_center_hz(j);
  Waveform w;
  w.samples.resize(1600);
  for (std::size_t t = 0; t < w.samples.size(); ++t)
    w.samples[t] = 0.5 * std::sin(2.0 * std::numbers::pi * f0 * t / 16000.0);
  FeatureMatrix fm = fe.forward(w);
  for (std::size_t f = 0; f < fm.frames(); ++f) {
    double own = fm.values(f, j);
    for (int o = 0; o < cfg.n_mels; ++o) {
      if (std::abs(o - j) < 2) continue;
      CHECK(own > fm.values(f, static_cast<std::size_t>(o)));
    }
  }
}

TEST_CASE("forward is deterministic", "[features]") {
  Frontend fe(FrontendConfig{});
  Waveform w = random_waveform(800, 33);
  FeatureMatrix a = fe.forward(w);
  FeatureMatrix b = fe.forward(w);
  CHECK(a.values.data == b.values.data);
}

TEST_CASE("scaling up the waveform never lowers log-mel values", "[features]") {
  Frontend fe(FrontendConfig{});
  Waveform w = random_waveform(900, 35, 0.4);
  Waveform w2 = w;
  for (double& s : w2.samples) s *= 1.7;
  FeatureMatrix a = fe.forward(w);
  FeatureMatrix b = fe.forward(w2);
  for (std::size_t i = 0; i < a.values.data.size(); ++i)
    CHECK(b.values.data[i] >= a.values.data[i] - 1e-12);
}

TEST_CASE("backward: zero upstream gradient gives zero waveform gradient",
          "[features]") {
  FrontendConfig cfg = tiny_config();
  Frontend fe(cfg);
  Waveform w = random_waveform(64, 41);
  FeatureMatrix fm = fe.forward(w);
  Matrix zeros(fm.values.rows, fm.values.cols);
  auto grad = fe.backward(fm, zeros);
  for (double gi : grad) CHECK(gi == 0.0);
}

TEST_CASE("backward matches central finite differences", "[features]") {
  FrontendConfig cfg = tiny_config();
  Frontend fe(cfg);
  Waveform w = random_waveform(64, 42);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  FeatureMatrix fm = fe.forward(w);
  Matrix grad_out(fm.values.rows, fm.values.cols);
  for (double& v : grad_out.data) v = dist(rng);

  auto analytic = fe.backward(fm, grad_out);
  auto objective = [&](const std::vector<double>& samples) {
    Waveform probe;
    probe.samples = samples;
    FeatureMatrix pfm = fe.forward(probe);
    double acc = 0.0;
    for (std::size_t i = 0; i < pfm.values.data.size(); ++i)
      acc += grad_out.data[i] * pfm.values.data[i];
    return acc;
  };
  auto numeric = oracles::central_diff(objective, w.samples, 1e-5);
  CHECK(oracles::max_rel_err(analytic, numeric) < 1e-4);
}

TEST_CASE("overlapping frames: gradient is the sum of per-frame parts",
          "[features]") {
  FrontendConfig cfg = tiny_config();  // frame 32, hop 16: two frames overlap
  Frontend fe(cfg);
  Waveform w = random_waveform(48 + 1, 44);
  FeatureMatrix fm = fe.forward(w);
  REQUIRE(fm.frames() == 2);

  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix grad_out(fm.values.rows, fm.values.cols);
  for (double& v : grad_out.data) v = dist(rng);

  Matrix only0 = grad_out, only1 = grad_out;
  for (std::size_t c = 0; c < grad_out.cols; ++c) {
    only0(1, c) = 0.0;
    only1(0, c) = 0.0;
  }
  auto full = fe.backward(fm, grad_out);
  auto part0 = fe.backward(fm, only0);
  auto part1 = fe.backward(fm, only1);
  for (std::size_t i = 0; i < full.size(); ++i)
    CHECK(full[i] == Catch::Approx(part0[i] + part1[i]).margin(1e-12));
}

TEST_CASE("backward contract errors", "[features]") {
  FrontendConfig cfg = tiny_config();
  Frontend fe(cfg);
  Waveform w = random_waveform(64, 46);
  FeatureMatrix fm = fe.forward(w);

  SECTION("shape mismatch") {
    Matrix bad(fm.values.rows + 1, fm.values.cols);
    CHECK_THROWS_AS(fe.backward(fm, bad), ContractError);
  }
  SECTION("missing cache") {
    FeatureMatrix stripped = fm;
    stripped.spectra.clear();
    Matrix g(fm.values.rows, fm.values.cols);
    CHECK_THROWS_AS(fe.backward(stripped, g), ContractError);
  }
}
