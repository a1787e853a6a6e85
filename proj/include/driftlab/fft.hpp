// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "driftlab/common.hpp"

namespace driftlab {

// Iterative radix-2 FFT with the engineering sign convention
// X[k] = sum_t x[t] * exp(-2*pi*i*k*t/N). Twiddle factors are precomputed
// once per size, which matters: the frontend runs one transform per frame
// per attack iteration.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (n == 0 || (n & (n - 1)) != 0)
      throw ContractError("Fft: size must be a power of two");
    roots_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
      double a = -2.0 * std::numbers::pi * static_cast<double>(j) /
                 static_cast<double>(n);
      roots_[j] = {std::cos(a), std::sin(a)};
    }
  }

  std::size_t size() const { return n_; }

  void forward(std::vector<std::complex<double>>& a) const {
    if (a.size() != n_) throw ContractError("Fft: input size mismatch");
    if (n_ == 1) return;
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n_; ++i) {
      std::size_t bit = n_ >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      std::size_t stride = n_ / len;
      for (std::size_t i = 0; i < n_; i += len) {
        for (std::size_t j = 0; j < len / 2; ++j) {
          std::complex<double> w = roots_[j * stride];
          std::complex<double> u = a[i + j];
          std::complex<double> v = a[i + j + len / 2] * w;
          a[i + j] = u + v;
          a[i + j + len / 2] = u - v;
        }
      }
    }
  }

 private:
  std::size_t n_;
  std::vector<std::complex<double>> roots_;
};

}  // namespace driftlab
