// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// CTC loss and gradient via log-space forward-backward, greedy decoding,
// and a brute-force path-enumeration oracle for small instances.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "driftlab/common.hpp"
#include "driftlab/mat.hpp"

namespace driftlab {

constexpr int kBlank = 0;  // blank label index, fixed convention

// Ordered character set; label i (i >= 1) is chars[i-1], 0 is blank.
struct Vocabulary {
  std::string chars;

  static Vocabulary lowercase_letters_space() {
    return Vocabulary{"abcdefghijklmnopqrstuvwxyz "};
  }

  int size() const { return static_cast<int>(chars.size()); }

  int index_of(char c) const {
    auto pos = chars.find(c);
    return pos == std::string::npos ? -1 : static_cast<int>(pos) + 1;
  }

  char char_at(int label) const { return chars.at(static_cast<std::size_t>(label - 1)); }

  bool operator==(const Vocabulary&) const = default;
};

struct Transcript {
  std::string text;
  std::vector<int> labels;

  static Transcript from_text(const std::string& text, const Vocabulary& vocab) {
    Transcript t;
    t.text = text;
    t.labels.reserve(text.size());
    for (char c : text) {
      int idx = vocab.index_of(c);
      if (idx < 0)
        throw DataError(std::string("character not in vocabulary: '") + c + "'");
      t.labels.push_back(idx);
    }
    return t;
  }
};

// frames x (V+1) unnormalized scores, blank at column 0.
struct LogitMatrix {
  Matrix values;
  Vocabulary vocab;

  std::size_t frames() const { return values.rows; }
};

// Minimal number of frames that can emit `labels`: one frame per label
// plus a separating blank frame for each adjacent repeat.
inline std::size_t ctc_min_frames(const std::vector<int>& labels) {
  std::size_t repeats = 0;
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (labels[i] == labels[i - 1]) ++repeats;
  return labels.size() + repeats;
}

inline bool ctc_feasible(std::size_t frames, const std::vector<int>& labels) {
  return frames >= ctc_min_frames(labels);
}

namespace detail {

inline double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Row-wise log-softmax of the logits.
inline Matrix log_softmax(const Matrix& logits) {
  Matrix y(logits.rows, logits.cols);
  for (std::size_t t = 0; t < logits.rows; ++t) {
    const double* row = logits.row(t);
    double m = *std::max_element(row, row + logits.cols);
    double z = 0.0;
    for (std::size_t k = 0; k < logits.cols; ++k) z += std::exp(row[k] - m);
    double lz = m + std::log(z);
    for (std::size_t k = 0; k < logits.cols; ++k) y(t, k) = row[k] - lz;
  }
  return y;
}

}  // namespace detail

struct CtcResult {
  double loss = 0.0;
  Matrix grad;  // d loss / d logits, frames x (V+1)
};

// -ln P(target | softmax(logits)) by forward-backward over the
// blank-extended label sequence, all in log space. The gradient comes out
// in the usual softmax-minus-alignment-posterior form.
inline CtcResult ctc_loss(const LogitMatrix& logits, const Transcript& target) {
  const std::size_t T = logits.frames();
  const std::size_t V1 = logits.values.cols;
  if (T < 1) throw ContractError("ctc_loss: need at least one frame");
  for (int l : target.labels)
    if (l < 1 || l >= static_cast<int>(V1))
      throw ContractError("ctc_loss: label outside vocabulary");
  if (!ctc_feasible(T, target.labels))
    throw InfeasibleTargetError(
        "target needs " + std::to_string(ctc_min_frames(target.labels)) +
        " frames, only " + std::to_string(T) + " available");

  const double ninf = -std::numeric_limits<double>::infinity();
  const Matrix y = detail::log_softmax(logits.values);

  const std::size_t L = target.labels.size();
  const std::size_t S = 2 * L + 1;
  std::vector<int> ext(S, kBlank);
  for (std::size_t i = 0; i < L; ++i) ext[2 * i + 1] = target.labels[i];

  auto window = [&](std::size_t t, std::size_t& lo, std::size_t& hi) {
    // states reachable at time t that can still reach the end
    long start = static_cast<long>(S) - 2 * static_cast<long>(T - t);
    lo = static_cast<std::size_t>(std::max(0l, start));
    hi = std::min(S, 2 * t + 2);
  };

  Matrix alpha(T, S, ninf), beta(T, S, ninf);
  alpha(0, 0) = y(0, static_cast<std::size_t>(ext[0]));
  if (S > 1) alpha(0, 1) = y(0, static_cast<std::size_t>(ext[1]));
  for (std::size_t t = 1; t < T; ++t) {
    std::size_t lo, hi;
    window(t, lo, hi);
    for (std::size_t s = lo; s < hi; ++s) {
      double a = alpha(t - 1, s);
      if (s >= 1) a = detail::log_sum_exp(a, alpha(t - 1, s - 1));
      if (s >= 2 && ext[s] != kBlank && ext[s - 2] != ext[s])
        a = detail::log_sum_exp(a, alpha(t - 1, s - 2));
      alpha(t, s) = a + y(t, static_cast<std::size_t>(ext[s]));
    }
  }
  double log_p = alpha(T - 1, S - 1);
  if (S > 1) log_p = detail::log_sum_exp(log_p, alpha(T - 1, S - 2));
  if (!std::isfinite(log_p))
    throw NumericError("ctc_loss: path probability underflowed to zero");

  beta(T - 1, S - 1) = 0.0;
  if (S > 1) beta(T - 1, S - 2) = 0.0;
  for (std::size_t t = T - 1; t-- > 0;) {
    std::size_t lo, hi;
    window(t, lo, hi);
    for (std::size_t s = lo; s < hi; ++s) {
      double b = beta(t + 1, s) + y(t + 1, static_cast<std::size_t>(ext[s]));
      if (s + 1 < S)
        b = detail::log_sum_exp(
            b, beta(t + 1, s + 1) + y(t + 1, static_cast<std::size_t>(ext[s + 1])));
      if (s + 2 < S && ext[s] != kBlank && ext[s + 2] != ext[s])
        b = detail::log_sum_exp(
            b, beta(t + 1, s + 2) + y(t + 1, static_cast<std::size_t>(ext[s + 2])));
      beta(t, s) = b;
    }
  }

  CtcResult out;
  out.loss = -log_p;
  out.grad = Matrix(T, V1);
  // alpha+beta sums every path through state s at time t (each emission
  // counted once), so exp(alpha+beta - log_p) is the state posterior.
  std::vector<double> label_post(V1);
  for (std::size_t t = 0; t < T; ++t) {
    std::fill(label_post.begin(), label_post.end(), ninf);
    for (std::size_t s = 0; s < S; ++s) {
      double ab = alpha(t, s) + beta(t, s);
      if (ab == ninf) continue;
      auto k = static_cast<std::size_t>(ext[s]);
      label_post[k] = detail::log_sum_exp(label_post[k], ab);
    }
    for (std::size_t k = 0; k < V1; ++k) {
      double post = label_post[k] == ninf ? 0.0 : std::exp(label_post[k] - log_p);
      out.grad(t, k) = std::exp(y(t, k)) - post;
    }
  }
  return out;
}

// Sums softmax path probabilities over every frame-labelling whose CTC
// collapse (merge repeats, then drop blanks) equals the target. Test
// oracle only; guarded against blowing up.
inline double brute_force_ctc(const LogitMatrix& logits, const Transcript& target) {
  const std::size_t T = logits.frames();
  const std::size_t V1 = logits.values.cols;
  double paths = std::pow(static_cast<double>(V1), static_cast<double>(T));
  if (paths > 2 * 1024 * 1024)
    throw GuardError("brute_force_ctc: instance too large to enumerate");

  const Matrix y = detail::log_softmax(logits.values);
  std::vector<int> path(T, 0);
  double total = 0.0;
  while (true) {
    // collapse: merge repeats, then drop blanks
    std::vector<int> collapsed;
    for (std::size_t t = 0; t < T; ++t) {
      if (t > 0 && path[t] == path[t - 1]) continue;
      if (path[t] != kBlank) collapsed.push_back(path[t]);
    }
    if (collapsed == target.labels) {
      double lp = 0.0;
      for (std::size_t t = 0; t < T; ++t)
        lp += y(t, static_cast<std::size_t>(path[t]));
      total += std::exp(lp);
    }
    std::size_t i = 0;
    for (; i < T; ++i) {
      if (++path[i] < static_cast<int>(V1)) break;
      path[i] = 0;
    }
    if (i == T) break;
  }
  if (total <= 0.0)
    return std::numeric_limits<double>::infinity();
  return -std::log(total);
}

// Per-frame argmax (ties -> lowest index), merge repeats, drop blanks.
inline Transcript greedy_decode(const LogitMatrix& logits) {
  Transcript t;
  int prev = -1;
  for (std::size_t f = 0; f < logits.frames(); ++f) {
    const double* row = logits.values.row(f);
    int best = 0;
    for (std::size_t k = 1; k < logits.values.cols; ++k)
      if (row[k] > row[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
    if (best != prev && best != kBlank) {
      t.labels.push_back(best);
      t.text.push_back(logits.vocab.char_at(best));
    }
    prev = best;
  }
  return t;
}

}  // namespace driftlab
