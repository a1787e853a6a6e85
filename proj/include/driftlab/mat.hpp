// Copyright 2026 The driftlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.

#pragma once

#include <cstddef>
#include <vector>

#include "driftlab/common.hpp"

namespace driftlab {

// Dense row-major matrix of doubles. Just enough linear algebra for the
// models in this project; anything heavier belongs in the call sites.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  bool same_shape(const Matrix& o) const {
    return rows == o.rows && cols == o.cols;
  }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

// y += M * x  (y: rows, x: cols)
inline void matvec_acc(const Matrix& m, const double* x, double* y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* mr = m.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) acc += mr[c] * x[c];
    y[r] += acc;
  }
}

// y += M^T * x  (y: cols, x: rows)
inline void matvec_t_acc(const Matrix& m, const double* x, double* y) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* mr = m.row(r);
    const double xr = x[r];
    for (std::size_t c = 0; c < m.cols; ++c) y[c] += xr * mr[c];
  }
}

// G += a * b^T  (G: |a| x |b|), the outer-product accumulation used by
// every parameter-gradient in the models.
inline void outer_acc(Matrix& g, const double* a, const double* b) {
  for (std::size_t r = 0; r < g.rows; ++r) {
    double* gr = g.row(r);
    const double ar = a[r];
    for (std::size_t c = 0; c < g.cols; ++c) gr[c] += ar * b[c];
  }
}

}  // namespace driftlab
