// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/attention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "multishot/error.hpp"
#include "multishot/kernel.hpp"

namespace multishot {

std::vector<double> stable_softmax(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::EmptyInput, "softmax of an empty vector");
  double peak = -std::numeric_limits<double>::infinity();
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error(ErrorCode::NonFiniteInput, "softmax input is not finite");
    peak = std::max(peak, s);
  }
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

namespace {

std::string shape(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

template <typename T>
void check_qkv(const Matrix<T>& q, const Matrix<T>& k, const Matrix<T>& v) {
  if (q.cols() != k.cols() || k.rows() != v.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "Q " + shape(q.rows(), q.cols()) + ", K " +
                                              shape(k.rows(), k.cols()) + ", V " +
                                              shape(v.rows(), v.cols()));
  }
  if (!q.all_finite() || !k.all_finite() || !v.all_finite()) {
    throw Error(ErrorCode::NonFiniteInput, "attention inputs must be finite");
  }
}

}  // namespace

MatrixD masked_dense_attention(const MatrixD& q, const MatrixD& k, const MatrixD& v,
                               const BoolMask& mask, double scale) {
  check_qkv(q, k, v);
  if (mask.rows() != q.rows() || mask.cols() != k.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "mask " + shape(mask.rows(), mask.cols()) +
                                              " does not match " + std::to_string(q.rows()) +
                                              " queries and " + std::to_string(k.rows()) +
                                              " keys");
  }
  MatrixD out(q.rows(), v.cols());
  std::vector<double> scores;
  std::vector<std::size_t> visible;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    scores.clear();
    visible.clear();
    for (std::size_t j = 0; j < k.rows(); ++j) {
      if (!mask(i, j)) continue;
      double s = 0.0;
      for (std::size_t c = 0; c < q.cols(); ++c) s += q(i, c) * k(j, c);
      scores.push_back(scale * s);
      visible.push_back(j);
    }
    if (visible.empty()) {
      throw Error(ErrorCode::EmptyAttentionRow, "query " + std::to_string(i) + " sees no keys");
    }
    std::vector<double> p = stable_softmax(scores);
    for (std::size_t n = 0; n < visible.size(); ++n) {
      for (std::size_t c = 0; c < v.cols(); ++c) out(i, c) += p[n] * v(visible[n], c);
    }
  }
  return out;
}

template <typename T>
Matrix<T> dense_attention(const Matrix<T>& q, const Matrix<T>& k, const Matrix<T>& v, T scale) {
  check_qkv(q, k, v);
  if (v.cols() != q.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "value width must equal query width");
  }
  if (k.rows() == 0 && q.rows() > 0) {
    throw Error(ErrorCode::EmptyAttentionRow, "no keys to attend to");
  }
  Matrix<T> out(q.rows(), v.cols());
  std::vector<T> scratch;
  kernel::attend_block(q, 0, q.rows(), k.data(), v.data(), k.rows(), scale, out, scratch);
  return out;
}

template MatrixD dense_attention<double>(const MatrixD&, const MatrixD&, const MatrixD&, double);
template MatrixF dense_attention<float>(const MatrixF&, const MatrixF&, const MatrixF&, float);

}  // namespace multishot
