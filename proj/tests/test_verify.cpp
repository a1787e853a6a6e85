// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "driftlab/verify.hpp"

using namespace driftlab;

namespace {

Embedding emb(std::vector<double> v) {
  Embedding e;
  e.v = std::move(v);
  double n2 = 0.0;
  for (double x : e.v) n2 += x * x;
  e.norm = std::sqrt(n2);
  return e;
}

}  // namespace

TEST_CASE("cosine similarity basics", "[verify]") {
  Embedding a = emb({1.0, 2.0, 3.0});
  CHECK(cosine_similarity(a, a) == Catch::Approx(1.0));
  CHECK(cosine_similarity(emb({1.0, 0.0}), emb({0.0, 1.0})) ==
        Catch::Approx(0.0).margin(1e-15));

  SECTION("scale invariance") {
    Embedding b = emb({-0.5, 0.25, 1.0});
    Embedding scaled = emb({-0.5 * 7, 0.25 * 7, 1.0 * 7});
    CHECK(cosine_similarity(a, scaled) ==
          Catch::Approx(cosine_similarity(a, b)).margin(1e-12));
  }
  SECTION("zero norm is degenerate") {
    Embedding z;
    z.v = {0.0, 0.0, 0.0};
    z.norm = 0.0;
    CHECK_THROWS_AS(cosine_similarity(a, z), DegenerateInputError);
  }
}

TEST_CASE("pairing arithmetic", "[verify]") {
  auto build = [](int n) {
    std::map<std::string, Embedding> clean, adv;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
      std::string key = "spk" + std::to_string(1000 + i);
      clean[key] = emb({dist(rng), dist(rng), dist(rng)});
      adv[key] = emb({dist(rng), dist(rng), dist(rng)});
    }
    return std::pair{clean, adv};
  };

  SECTION("N=109 reproduces the full pairing counts") {
    auto [clean, adv] = build(109);
    ScoreSet s = make_pairs(clean, adv);
    CHECK(s.genuine.size() == 109);
    CHECK(s.impostor.size() == 11772);
    CHECK(s.genuine.size() + s.impostor.size() == 11881);
  }
  SECTION("N=2") {
    auto [clean, adv] = build(2);
    ScoreSet s = make_pairs(clean, adv);
    CHECK(s.genuine.size() == 2);
    CHECK(s.impostor.size() == 2);
  }
  SECTION("counts are N-squared for a range of N") {
    for (int n : {3, 5, 17}) {
      auto [clean, adv] = build(n);
      ScoreSet s = make_pairs(clean, adv);
      CHECK(s.genuine.size() == static_cast<std::size_t>(n));
      CHECK(s.impostor.size() == static_cast<std::size_t>(n * (n - 1)));
    }
  }
  SECTION("identical embeddings score 1.0 everywhere") {
    std::map<std::string, Embedding> clean, adv;
    for (int i = 0; i < 3; ++i) {
      std::string key = "s" + std::to_string(i);
      clean[key] = emb({0.3, 0.4});
      adv[key] = emb({0.3, 0.4});
    }
    ScoreSet s = make_pairs(clean, adv);
    for (double v : s.genuine) CHECK(v == Catch::Approx(1.0));
    for (double v : s.impostor) CHECK(v == Catch::Approx(1.0));
  }
  SECTION("key mismatch names the missing speaker") {
    auto [clean, adv] = build(3);
    adv.erase("spk1001");
    try {
      make_pairs(clean, adv);
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("spk1001") != std::string::npos);
    }
  }
}

TEST_CASE("d-prime statistics", "[verify]") {
  SECTION("zero pooled variance with separated means is a +inf sentinel") {
    ScoreSet s;
    s.genuine = {0.9, 0.9};
    s.impostor = {0.1, 0.1};
    CHECK(std::isinf(d_prime(s).d_prime));
    CHECK(d_prime(s).d_prime > 0);
  }
  SECTION("equal means give zero") {
    ScoreSet s;
    s.genuine = {0.4, 0.6};
    s.impostor = {0.3, 0.7};
    CHECK(d_prime(s).d_prime == Catch::Approx(0.0).margin(1e-15));
  }
  SECTION("population variance is used") {
    ScoreSet s;
    s.genuine = {1.0, 2.0};   // mu 1.5, population var 0.25
    s.impostor = {0.0, 0.0};  // var 0
    ScoreStats st = d_prime(s);
    CHECK(st.var_gen == Catch::Approx(0.25));
    CHECK(st.d_prime == Catch::Approx(1.5 / std::sqrt(0.125)));
  }
  SECTION("Monte Carlo against the analytic value") {
    std::mt19937_64 rng(20240811);
    std::normal_distribution<double> gen(0.8, 0.1), imp(0.2, 0.1);
    ScoreSet s;
    for (int i = 0; i < 100000; ++i) s.genuine.push_back(gen(rng));
    for (int i = 0; i < 100000; ++i) s.impostor.push_back(imp(rng));
    double d = d_prime(s).d_prime;
    CHECK(d > 5.95);
    CHECK(d < 6.05);
  }
  SECTION("needs two scores per class") {
    ScoreSet s;
    s.genuine = {0.5};
    s.impostor = {0.1, 0.2};
    CHECK_THROWS_AS(d_prime(s), DegenerateInputError);
  }
}

TEST_CASE("d-prime is invariant under common positive-affine maps", "[verify]") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gen(0.7, 0.2), imp(0.1, 0.15);
  ScoreSet s;
  for (int i = 0; i < 500; ++i) s.genuine.push_back(gen(rng));
  for (int i = 0; i < 800; ++i) s.impostor.push_back(imp(rng));
  double base = d_prime(s).d_prime;
  for (auto [a, b] : {std::pair{2.0, 0.3}, {0.25, -1.0}, {10.0, 5.0}}) {
    ScoreSet t;
    for (double v : s.genuine) t.genuine.push_back(a * v + b);
    for (double v : s.impostor) t.impostor.push_back(a * v + b);
    CHECK(d_prime(t).d_prime == Catch::Approx(base).margin(1e-9));
  }
}

TEST_CASE("tmr at fixed fmr", "[verify]") {
  SECTION("hand-enumerated order statistics") {
    ScoreSet s;
    s.genuine = {0.9, 0.8, 0.7};
    s.impostor = {0.6, 0.5, 0.4, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005};
    // fmr <= 0.05 with 10 impostors forces zero impostor accepts, so the
    // threshold moves to the next grid value above 0.6
    TmrResult r = tmr_at_fmr(s, 0.05);
    CHECK(r.threshold == Catch::Approx(0.7));
    CHECK(r.tmr == Catch::Approx(1.0));
  }
  SECTION("perfect separation accepts every genuine pair") {
    ScoreSet s;
    s.genuine = {0.8, 0.9, 0.95};
    s.impostor = {0.1, 0.2, 0.3};
    for (double f : {0.001, 0.01, 0.2}) CHECK(tmr_at_fmr(s, f).tmr == 1.0);
  }
  SECTION("identical distributions track the target") {
    ScoreSet s;
    for (int i = 0; i < 1000; ++i) {
      s.genuine.push_back(i * 0.001);
      s.impostor.push_back(i * 0.001);
    }
    TmrResult r = tmr_at_fmr(s, 0.1);
    CHECK(r.tmr == Catch::Approx(0.1).margin(0.0011));
  }
  SECTION("all impostors tied at the top forces tmr 0") {
    ScoreSet s;
    s.genuine = {0.5, 0.4};
    s.impostor = {0.5, 0.5};
    TmrResult r = tmr_at_fmr(s, 0.001);
    CHECK(r.tmr == 0.0);
  }
}

TEST_CASE("tmr is a rank statistic", "[verify]") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gen(0.6, 0.3), imp(0.0, 0.3);
  ScoreSet s;
  for (int i = 0; i < 400; ++i) s.genuine.push_back(gen(rng));
  for (int i = 0; i < 2000; ++i) s.impostor.push_back(imp(rng));
  for (double target : {0.001, 0.01, 0.05}) {
    double base = tmr_at_fmr(s, target).tmr;
    ScoreSet t;
    auto warp = [](double v) { return std::tanh(3.0 * v) + 2.0; };
    for (double v : s.genuine) t.genuine.push_back(warp(v));
    for (double v : s.impostor) t.impostor.push_back(warp(v));
    CHECK(tmr_at_fmr(t, target).tmr == base);
  }
}

TEST_CASE("roc points", "[verify]") {
  SECTION("perfect separation passes through (0,1)") {
    ScoreSet s;
    s.genuine = {0.9, 0.8};
    s.impostor = {0.2, 0.1};
    auto pts = roc_points(s);
    CHECK(pts.front().fmr == 1.0);
    CHECK(pts.front().tmr == 1.0);
    bool hits = false;
    for (const auto& p : pts) hits |= (p.fmr == 0.0 && p.tmr == 1.0);
    CHECK(hits);
  }
  SECTION("single shared score gives two corner points") {
    ScoreSet s;
    s.genuine = {0.5, 0.5};
    s.impostor = {0.5, 0.5};
    auto pts = roc_points(s);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].fmr == 1.0);
    CHECK(pts[0].tmr == 1.0);
    CHECK(pts[1].fmr == 0.0);
    CHECK(pts[1].tmr == 0.0);
  }
  SECTION("identical distributions hug the diagonal") {
    ScoreSet s;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
      double v = dist(rng);
      s.genuine.push_back(v);
      s.impostor.push_back(v);
    }
    for (const auto& p : roc_points(s)) CHECK(p.fmr == Catch::Approx(p.tmr));
  }
  SECTION("tmr and fmr are monotone non-increasing in the threshold") {
    ScoreSet s;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gen(0.5, 0.4), imp(0.0, 0.4);
    for (int i = 0; i < 300; ++i) s.genuine.push_back(gen(rng));
    for (int i = 0; i < 300; ++i) s.impostor.push_back(imp(rng));
    auto pts = roc_points(s);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      CHECK(pts[i].threshold > pts[i - 1].threshold);
      CHECK(pts[i].fmr <= pts[i - 1].fmr);
      CHECK(pts[i].tmr <= pts[i - 1].tmr);
    }
  }
}
