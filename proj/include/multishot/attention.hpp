// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "multishot/matrix.hpp"

namespace multishot {

/// Max-shifted softmax. Throws EmptyInput / NonFiniteInput.
std::vector<double> stable_softmax(std::span<const double> scores);

/// Reference scaled dot-product attention under an arbitrary mask, in double
/// precision. This is the oracle the specialized paths are checked against,
/// so it deliberately stays a plain per-row loop over the mask.
///
/// Throws ShapeMismatch on inconsistent shapes, NonFiniteInput on NaN/Inf
/// inputs, and EmptyAttentionRow when a query row has no visible key.
MatrixD masked_dense_attention(const MatrixD& q, const MatrixD& k, const MatrixD& v,
                               const BoolMask& mask, double scale);

/// Unmasked attention of every query against every key; the dense baseline
/// for benchmarks.
template <typename T>
Matrix<T> dense_attention(const Matrix<T>& q, const Matrix<T>& k, const Matrix<T>& v, T scale);

extern template MatrixD dense_attention<double>(const MatrixD&, const MatrixD&, const MatrixD&,
                                                double);
extern template MatrixF dense_attention<float>(const MatrixF&, const MatrixF&, const MatrixF&,
                                               float);

/// 1/sqrt(d).
inline double default_scale(std::size_t d) { return 1.0 / std::sqrt(static_cast<double>(d)); }

/// FLOPs of one attention contraction: 2*l_q*l_kv*d for Q K^T plus the same
/// for the weighted sum over V. Softmax and scaling are not counted.
constexpr std::uint64_t dense_flops(std::uint64_t l_q, std::uint64_t l_kv, std::uint64_t d) {
  return 4 * l_q * l_kv * d;
}

}  // namespace multishot
