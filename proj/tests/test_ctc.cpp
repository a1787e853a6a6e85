// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "driftlab/ctc.hpp"
#include "oracles.hpp"

using namespace driftlab;

namespace {

LogitMatrix make_logits(std::size_t frames, const Vocabulary& vocab,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  LogitMatrix lm;
  lm.vocab = vocab;
  lm.values = Matrix(frames, static_cast<std::size_t>(vocab.size()) + 1);
  for (double& v : lm.values.data) v = dist(rng);
  return lm;
}

LogitMatrix uniform_logits(std::size_t frames, const Vocabulary& vocab) {
  LogitMatrix lm;
  lm.vocab = vocab;
  lm.values = Matrix(frames, static_cast<std::size_t>(vocab.size()) + 1, 0.0);
  return lm;
}

}  // namespace

TEST_CASE("hand-enumerated two-frame instance", "[ctc]") {
  Vocabulary vocab{"a"};
  LogitMatrix lm = uniform_logits(2, vocab);
  Transcript target = Transcript::from_text("a", vocab);
  // paths (a,a), (a,-), (-,a): 3 of 4 equally likely paths
  CtcResult r = ctc_loss(lm, target);
  CHECK(r.loss == Catch::Approx(-std::log(0.75)).margin(1e-12));
  CHECK(brute_force_ctc(lm, target) == Catch::Approx(-std::log(0.75)).margin(1e-12));
}

TEST_CASE("repeat needs a separating blank", "[ctc]") {
  Vocabulary vocab{"a"};
  LogitMatrix lm = uniform_logits(2, vocab);
  Transcript aa = Transcript::from_text("aa", vocab);
  CHECK_THROWS_AS(ctc_loss(lm, aa), InfeasibleTargetError);
  CHECK(ctc_min_frames(aa.labels) == 3);
}

TEST_CASE("empty target counts only all-blank paths", "[ctc]") {
  Vocabulary vocab{"a"};
  LogitMatrix lm = uniform_logits(2, vocab);
  Transcript empty = Transcript::from_text("", vocab);
  CHECK(brute_force_ctc(lm, empty) == Catch::Approx(std::log(4.0)).margin(1e-12));
  CHECK(ctc_loss(lm, empty).loss == Catch::Approx(std::log(4.0)).margin(1e-12));
}

TEST_CASE("loss matches brute force on random small instances", "[ctc]") {
  std::mt19937_64 rng(100);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t T = 1 + rng() % 5;
    int V = 1 + static_cast<int>(rng() % 2);
    Vocabulary vocab{std::string("ab").substr(0, static_cast<std::size_t>(V))};
    std::size_t L = rng() % 3;
    std::string text;
    for (std::size_t i = 0; i < L; ++i)
      text.push_back(vocab.chars[rng() % vocab.chars.size()]);
    Transcript target = Transcript::from_text(text, vocab);
    if (!ctc_feasible(T, target.labels)) continue;
    LogitMatrix lm = make_logits(T, vocab, rng());
    CtcResult r = ctc_loss(lm, target);
    double bf = brute_force_ctc(lm, target);
    CHECK(std::abs(r.loss - bf) < 1e-9);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("path probabilities over all collapsed strings sum to one", "[ctc]") {
  Vocabulary vocab{"ab"};
  LogitMatrix lm = make_logits(3, vocab, 7);
  // sum P(collapse(path)) over every possible collapsed string
  const Matrix y = [&] {
    Matrix out(lm.values.rows, lm.values.cols);
    for (std::size_t t = 0; t < lm.values.rows; ++t) {
      const double* row = lm.values.row(t);
      double m = *std::max_element(row, row + lm.values.cols);
      double z = 0.0;
      for (std::size_t k = 0; k < lm.values.cols; ++k) z += std::exp(row[k] - m);
      for (std::size_t k = 0; k < lm.values.cols; ++k)
        out(t, k) = row[k] - m - std::log(z);
    }
    return out;
  }();
  double total = 0.0;
  for (int p0 = 0; p0 < 3; ++p0)
    for (int p1 = 0; p1 < 3; ++p1)
      for (int p2 = 0; p2 < 3; ++p2)
        total += std::exp(y(0, static_cast<std::size_t>(p0)) +
                          y(1, static_cast<std::size_t>(p1)) +
                          y(2, static_cast<std::size_t>(p2)));
  CHECK(total == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("gradient matches central finite differences", "[ctc]") {
  Vocabulary vocab{"ab"};
  LogitMatrix lm = make_logits(4, vocab, 55);
  Transcript target = Transcript::from_text("ab", vocab);
  CtcResult res = ctc_loss(lm, target);

  auto objective = [&](const std::vector<double>& flat) {
    LogitMatrix probe = lm;
    probe.values.data = flat;
    return ctc_loss(probe, target).loss;
  };
  auto numeric = oracles::central_diff(objective, lm.values.data, 1e-5);
  CHECK(oracles::max_rel_err(res.grad.data, numeric) < 1e-4);
}

TEST_CASE("loss is non-negative and shift-invariant", "[ctc]") {
  Vocabulary vocab{"ab"};
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    LogitMatrix lm = make_logits(5, vocab, rng());
    Transcript target = Transcript::from_text("ba", vocab);
    double base = ctc_loss(lm, target).loss;
    CHECK(base >= 0.0);
    LogitMatrix shifted = lm;
    for (std::size_t t = 0; t < shifted.values.rows; ++t)
      for (std::size_t k = 0; k < shifted.values.cols; ++k)
        shifted.values(t, k) += 3.25 * static_cast<double>(t);  // per-frame shift
    CHECK(ctc_loss(shifted, target).loss == Catch::Approx(base).margin(1e-9));
  }
}

TEST_CASE("greedy decode collapse rules", "[ctc]") {
  Vocabulary vocab{"ab"};
  auto decode_frames = [&](const std::vector<int>& argmaxes) {
    LogitMatrix lm = uniform_logits(argmaxes.size(), vocab);
    for (std::size_t t = 0; t < argmaxes.size(); ++t)
      lm.values(t, static_cast<std::size_t>(argmaxes[t])) = 5.0;
    return greedy_decode(lm).text;
  };
  CHECK(decode_frames({0, 1, 1, 0, 2}) == "ab");
  CHECK(decode_frames({0, 0, 0}) == "");
  CHECK(decode_frames({1, 0, 1}) == "aa");
}

TEST_CASE("greedy decode breaks ties toward the lowest index", "[ctc]") {
  Vocabulary vocab{"ab"};
  LogitMatrix lm = uniform_logits(1, vocab);  // all-equal row: blank wins
  CHECK(greedy_decode(lm).text.empty());
  lm.values(0, 1) = 1.0;
  lm.values(0, 2) = 1.0;  // tie between 'a' and 'b' -> 'a'
  CHECK(greedy_decode(lm).text == "a");
}

TEST_CASE("brute force guard trips on big instances", "[ctc]") {
  Vocabulary vocab{"abcdefghijklmnopqrstuvwxyz "};
  LogitMatrix lm = uniform_logits(8, vocab);
  Transcript t = Transcript::from_text("a", vocab);
  CHECK_THROWS_AS(brute_force_ctc(lm, t), GuardError);
}
