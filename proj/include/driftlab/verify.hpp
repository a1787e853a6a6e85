// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Speaker-verification evaluation: the genuine/impostor pairing protocol,
// cosine scoring, d', TMR at a fixed FMR, and ROC points. The accept rule
// everywhere is "accept iff score >= threshold".

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "driftlab/common.hpp"
#include "driftlab/model.hpp"

namespace driftlab {

inline double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.v.size() != b.v.size())
    throw ContractError("cosine: dimension mismatch");
  if (!(a.norm > 0.0) || !(b.norm > 0.0))
    throw DegenerateInputError("cosine: zero-norm embedding");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) dot += a.v[i] * b.v[i];
  return std::clamp(dot / (a.norm * b.norm), -1.0, 1.0);
}

struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

struct ScoredPair {
  std::string clean_speaker;
  std::string adv_speaker;
  double score;
  bool is_genuine;
};

// All N^2 ordered pairs (clean_i, adv_j): i == j genuine (N scores),
// i != j impostor (N(N-1) scores). Both maps must cover the same speakers.
inline ScoreSet make_pairs(const std::map<std::string, Embedding>& clean,
                           const std::map<std::string, Embedding>& adv,
                           std::vector<ScoredPair>* pairs_out = nullptr) {
  std::string missing;
  for (const auto& [k, _] : clean)
    if (!adv.count(k)) missing += (missing.empty() ? "" : ", ") + k;
  for (const auto& [k, _] : adv)
    if (!clean.count(k)) missing += (missing.empty() ? "" : ", ") + k;
  if (!missing.empty())
    throw DataError("make_pairs: speaker keys differ between sides: " + missing);
  if (clean.size() < 2)
    throw DataError("make_pairs: need at least 2 speakers");

  ScoreSet s;
  for (const auto& [ci, ei] : clean) {
    for (const auto& [aj, ej] : adv) {
      double score = cosine_similarity(ei, ej);
      bool genuine = ci == aj;
      (genuine ? s.genuine : s.impostor).push_back(score);
      if (pairs_out) pairs_out->push_back({ci, aj, score, genuine});
    }
  }
  return s;
}

struct ScoreStats {
  double mu_gen = 0.0;
  double mu_imp = 0.0;
  double var_gen = 0.0;  // population variance (divide by n)
  double var_imp = 0.0;
  double d_prime = 0.0;
};

// d' = (mu_gen - mu_imp) / sqrt((var_gen + var_imp) / 2). Zero pooled
// variance yields +-inf for unequal means and 0 for equal means.
inline ScoreStats d_prime(const ScoreSet& s) {
  if (s.genuine.size() < 2 || s.impostor.size() < 2)
    throw DegenerateInputError("d_prime: need >= 2 scores per class");
  auto moments = [](const std::vector<double>& xs, double& mu, double& var) {
    mu = 0.0;
    for (double x : xs) mu += x;
    mu /= static_cast<double>(xs.size());
    var = 0.0;
    for (double x : xs) var += (x - mu) * (x - mu);
    var /= static_cast<double>(xs.size());
  };
  ScoreStats st;
  moments(s.genuine, st.mu_gen, st.var_gen);
  moments(s.impostor, st.mu_imp, st.var_imp);
  double pooled = std::sqrt(0.5 * (st.var_gen + st.var_imp));
  double diff = st.mu_gen - st.mu_imp;
  if (pooled == 0.0) {
    st.d_prime = diff == 0.0 ? 0.0
                 : diff > 0.0 ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
  } else {
    st.d_prime = diff / pooled;
  }
  return st;
}

struct TmrResult {
  double tmr = 0.0;
  double threshold = 0.0;
};

// Empirical threshold on the observed score grid, conservative side: the
// smallest observed value tau with FMR(tau) <= fmr_target. If even the
// top of the grid admits too many impostors, tau moves just above it
// (achieved FMR 0, TMR 0).
inline TmrResult tmr_at_fmr(const ScoreSet& s, double fmr_target = 0.001) {
  if (s.genuine.empty() || s.impostor.empty())
    throw DegenerateInputError("tmr_at_fmr: empty score class");
  if (!(fmr_target > 0.0 && fmr_target < 1.0))
    throw ContractError("tmr_at_fmr: fmr_target must be in (0,1)");
  std::vector<double> grid;
  grid.reserve(s.genuine.size() + s.impostor.size());
  grid.insert(grid.end(), s.genuine.begin(), s.genuine.end());
  grid.insert(grid.end(), s.impostor.begin(), s.impostor.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> imp = s.impostor;
  std::sort(imp.begin(), imp.end());
  auto fmr_at = [&](double tau) {
    auto it = std::lower_bound(imp.begin(), imp.end(), tau);
    return static_cast<double>(imp.end() - it) / static_cast<double>(imp.size());
  };

  double tau = std::nextafter(grid.back(), std::numeric_limits<double>::max());
  for (double g : grid) {
    if (fmr_at(g) <= fmr_target) {
      tau = g;
      break;
    }
  }
  std::size_t accepted = 0;
  for (double g : s.genuine)
    if (g >= tau) ++accepted;
  return {static_cast<double>(accepted) / static_cast<double>(s.genuine.size()),
          tau};
}

struct RocPoint {
  double fmr;
  double tmr;
  double threshold;
};

// One point per distinct observed score (ascending thresholds) plus a
// final point just above the grid; includes (1,1) at the low end.
inline std::vector<RocPoint> roc_points(const ScoreSet& s) {
  if (s.genuine.empty() || s.impostor.empty())
    throw DegenerateInputError("roc_points: empty score class");
  std::vector<double> grid;
  grid.insert(grid.end(), s.genuine.begin(), s.genuine.end());
  grid.insert(grid.end(), s.impostor.begin(), s.impostor.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  grid.push_back(std::nextafter(grid.back(), std::numeric_limits<double>::max()));

  std::vector<double> gen = s.genuine, imp = s.impostor;
  std::sort(gen.begin(), gen.end());
  std::sort(imp.begin(), imp.end());
  auto frac_ge = [](const std::vector<double>& xs, double tau) {
    auto it = std::lower_bound(xs.begin(), xs.end(), tau);
    return static_cast<double>(xs.end() - it) / static_cast<double>(xs.size());
  };
  std::vector<RocPoint> pts;
  pts.reserve(grid.size());
  for (double tau : grid) pts.push_back({frac_ge(imp, tau), frac_ge(gen, tau), tau});
  return pts;
}

}  // namespace driftlab
