// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
//
// Differentiable log-mel frontend. forward() keeps the intermediates
// needed so backward() can push a feature-level gradient all the way to
// the waveform samples with the exact chain rule; that path is what makes
// waveform-space attacks possible.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "driftlab/audio.hpp"
#include "driftlab/common.hpp"
#include "driftlab/fft.hpp"
#include "driftlab/mat.hpp"

namespace driftlab {

struct FrontendConfig {
  int frame_len = 400;  // 25 ms at 16 kHz
  int hop = 160;        // 10 ms
  int n_fft = 512;
  int n_mels = 40;
  double preemph = 0.97;
  double floor = 1e-10;  // added before the log, keeps it differentiable

  bool operator==(const FrontendConfig&) const = default;
};

// Log-mel features plus the cached intermediates for the backward pass.
struct FeatureMatrix {
  Matrix values;      // frames x n_mels, ln(energy + floor)
  Matrix mel_energy;  // frames x n_mels, pre-log energies
  std::vector<std::complex<double>> spectra;  // frames x (n_fft/2+1)
  FrontendConfig cfg;
  std::size_t n_samples = 0;

  std::size_t frames() const { return values.rows; }
  bool has_cache() const { return !spectra.empty(); }
};

inline double hz_to_mel(double f) {
  return 2595.0 * std::log10(1.0 + f / 700.0);
}

inline double mel_to_hz(double m) {
  return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0);
}

class Frontend {
 public:
  explicit Frontend(FrontendConfig cfg, int sample_rate_hz = 16000)
      : cfg_(cfg), sample_rate_hz_(sample_rate_hz), fft_(check_fft_size(cfg)) {
    if (cfg.hop < 1) throw ConfigError("frontend: hop must be >= 1");
    if (cfg.frame_len < 2 || cfg.frame_len > cfg.n_fft)
      throw ConfigError("frontend: need 2 <= frame_len <= n_fft");
    if (cfg.n_mels < 2) throw ConfigError("frontend: n_mels must be >= 2");
    if (!(cfg.floor > 0.0)) throw ConfigError("frontend: floor must be > 0");
    if (sample_rate_hz < 1) throw ConfigError("frontend: bad sample rate");
    build_window();
    build_filterbank();
  }

  const FrontendConfig& config() const { return cfg_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t n_bins() const { return static_cast<std::size_t>(cfg_.n_fft) / 2 + 1; }
  const Matrix& filterbank() const { return filterbank_; }
  const std::vector<double>& window() const { return window_; }
  double filter_center_hz(int mel_index) const {
    return mel_to_hz(mel_points_[mel_index + 1]);
  }

  std::size_t frame_count(std::size_t n_samples) const {
    return 1 + (n_samples - static_cast<std::size_t>(cfg_.frame_len)) /
                   static_cast<std::size_t>(cfg_.hop);
  }

  FeatureMatrix forward(const Waveform& w) const {
    if (w.sample_rate_hz != sample_rate_hz_)
      throw ContractError("frontend: waveform sample rate mismatch");
    const std::size_t T = w.samples.size();
    if (T < static_cast<std::size_t>(cfg_.frame_len) + 1)
      throw DegenerateInputError("frontend: waveform shorter than one frame");

    // pre-emphasis: s'[t] = s[t] - p*s[t-1], s'[0] = s[0]
    std::vector<double> pre(T);
    pre[0] = w.samples[0];
    for (std::size_t t = 1; t < T; ++t)
      pre[t] = w.samples[t] - cfg_.preemph * w.samples[t - 1];

    const std::size_t frames = frame_count(T);
    const std::size_t bins = n_bins();
    FeatureMatrix fm;
    fm.cfg = cfg_;
    fm.n_samples = T;
    fm.values = Matrix(frames, static_cast<std::size_t>(cfg_.n_mels));
    fm.mel_energy = Matrix(frames, static_cast<std::size_t>(cfg_.n_mels));
    fm.spectra.resize(frames * bins);

    std::vector<std::complex<double>> buf(static_cast<std::size_t>(cfg_.n_fft));
    std::vector<double> power(bins);
    for (std::size_t f = 0; f < frames; ++f) {
      const double* frame = pre.data() + f * static_cast<std::size_t>(cfg_.hop);
      for (int t = 0; t < cfg_.frame_len; ++t)
        buf[static_cast<std::size_t>(t)] = frame[t] * window_[static_cast<std::size_t>(t)];
      for (int t = cfg_.frame_len; t < cfg_.n_fft; ++t)
        buf[static_cast<std::size_t>(t)] = 0.0;
      fft_.forward(buf);
      for (std::size_t k = 0; k < bins; ++k) {
        fm.spectra[f * bins + k] = buf[k];
        power[k] = std::norm(buf[k]);
      }
      double* energy = fm.mel_energy.row(f);
      for (int j = 0; j < cfg_.n_mels; ++j) {
        const double* fb = filterbank_.row(static_cast<std::size_t>(j));
        double e = 0.0;
        for (std::size_t k = 0; k < bins; ++k) e += fb[k] * power[k];
        energy[j] = e;
        fm.values(f, static_cast<std::size_t>(j)) = std::log(e + cfg_.floor);
      }
    }
    return fm;
  }

  // Gradient of sum(grad_out (.) values) with respect to the waveform.
  std::vector<double> backward(const FeatureMatrix& fm,
                               const Matrix& grad_out) const {
    if (!fm.has_cache())
      throw ContractError("frontend backward: feature cache missing");
    if (!(fm.cfg == cfg_))
      throw ContractError("frontend backward: config mismatch with cache");
    if (!grad_out.same_shape(fm.values))
      throw ContractError("frontend backward: grad shape mismatch");

    const std::size_t T = fm.n_samples;
    const std::size_t frames = fm.frames();
    const std::size_t bins = n_bins();
    std::vector<double> grad_pre(T, 0.0);
    std::vector<std::complex<double>> z(static_cast<std::size_t>(cfg_.n_fft));

    for (std::size_t f = 0; f < frames; ++f) {
      // log and filterbank
      std::vector<double> grad_power(bins, 0.0);
      for (int j = 0; j < cfg_.n_mels; ++j) {
        double ge = grad_out(f, static_cast<std::size_t>(j)) /
                    (fm.mel_energy(f, static_cast<std::size_t>(j)) + cfg_.floor);
        const double* fb = filterbank_.row(static_cast<std::size_t>(j));
        for (std::size_t k = 0; k < bins; ++k) grad_power[k] += ge * fb[k];
      }
      // power spectrum: with X = DFT(v) and P_k = |X_k|^2 for k <= N/2,
      // dL/dv_t = 2 * Re( sum_k gP_k * conj(X_k) * e^{-2pi i k t / N} ),
      // i.e. one more forward FFT applied to gP_k * conj(X_k).
      for (std::size_t k = 0; k < bins; ++k)
        z[k] = grad_power[k] * std::conj(fm.spectra[f * bins + k]);
      for (std::size_t k = bins; k < static_cast<std::size_t>(cfg_.n_fft); ++k)
        z[k] = 0.0;
      fft_.forward(z);
      // window and overlap-add back into the pre-emphasized signal
      double* dst = grad_pre.data() + f * static_cast<std::size_t>(cfg_.hop);
      for (int t = 0; t < cfg_.frame_len; ++t)
        dst[t] += 2.0 * z[static_cast<std::size_t>(t)].real() *
                  window_[static_cast<std::size_t>(t)];
    }

    // pre-emphasis adjoint
    std::vector<double> grad(T);
    for (std::size_t t = 0; t < T; ++t) {
      grad[t] = grad_pre[t];
      if (t + 1 < T) grad[t] -= cfg_.preemph * grad_pre[t + 1];
    }
    return grad;
  }

 private:
  static std::size_t check_fft_size(const FrontendConfig& cfg) {
    if (cfg.n_fft < 2 || (cfg.n_fft & (cfg.n_fft - 1)) != 0)
      throw ConfigError("frontend: n_fft must be a power of two");
    return static_cast<std::size_t>(cfg.n_fft);
  }

  void build_window() {
    window_.resize(static_cast<std::size_t>(cfg_.frame_len));
    for (int t = 0; t < cfg_.frame_len; ++t)
      window_[static_cast<std::size_t>(t)] =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * t / (cfg_.frame_len - 1));
  }

  // Triangular filters, linear in HTK mel, spanning 0 Hz to Nyquist.
  void build_filterbank() {
    const std::size_t bins = n_bins();
    const double mel_max = hz_to_mel(sample_rate_hz_ / 2.0);
    mel_points_.resize(static_cast<std::size_t>(cfg_.n_mels) + 2);
    for (int j = 0; j < cfg_.n_mels + 2; ++j)
      mel_points_[static_cast<std::size_t>(j)] = mel_max * j / (cfg_.n_mels + 1);

    filterbank_ = Matrix(static_cast<std::size_t>(cfg_.n_mels), bin_count(bins));
    for (int j = 0; j < cfg_.n_mels; ++j) {
      double left = mel_points_[static_cast<std::size_t>(j)];
      double center = mel_points_[static_cast<std::size_t>(j) + 1];
      double right = mel_points_[static_cast<std::size_t>(j) + 2];
      for (std::size_t k = 0; k < bins; ++k) {
        double mk = hz_to_mel(static_cast<double>(k) * sample_rate_hz_ / cfg_.n_fft);
        double w = 0.0;
        if (mk >= left && mk <= center && center > left)
          w = (mk - left) / (center - left);
        else if (mk > center && mk <= right && right > center)
          w = (right - mk) / (right - center);
        filterbank_(static_cast<std::size_t>(j), k) = w;
      }
    }
  }

  static std::size_t bin_count(std::size_t bins) { return bins; }

  FrontendConfig cfg_;
  int sample_rate_hz_;
  Fft fft_;
  std::vector<double> window_;
  std::vector<double> mel_points_;
  Matrix filterbank_;
};

}  // namespace driftlab
