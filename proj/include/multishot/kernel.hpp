// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

// Contiguous-block attention kernel shared by the window cross-attention and
// the packed sparse self-attention paths. Keys and values arrive already
// gathered, so the inner loops never branch on a mask.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstddef>
#include <span>
#include <vector>

#include "multishot/matrix.hpp"

namespace multishot::kernel {

template <typename T>
inline T dot(const T* a, const T* b, std::size_t n) {
  T s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

/// Attends queries [q_begin, q_end) against an `n_kv`-row block of keys and
/// values (row-major, width q.cols()), writing the matching rows of `out`.
/// `scratch` is resized as needed and can be reused across calls.
template <typename T>
void attend_block(const Matrix<T>& q, std::size_t q_begin, std::size_t q_end,
                  std::span<const T> keys, std::span<const T> values, std::size_t n_kv,
                  T scale, Matrix<T>& out, std::vector<T>& scratch) {
  const std::size_t d = q.cols();
  scratch.resize(n_kv);
  for (std::size_t i = q_begin; i < q_end; ++i) {
    const T* qi = q.row(i).data();
    T peak = -std::numeric_limits<T>::infinity();
    for (std::size_t j = 0; j < n_kv; ++j) {
      T s = scale * dot(qi, keys.data() + j * d, d);
      scratch[j] = s;
      peak = std::max(peak, s);
    }
    T total = 0;
    for (std::size_t j = 0; j < n_kv; ++j) {
      scratch[j] = std::exp(scratch[j] - peak);
      total += scratch[j];
    }
    T* oi = out.row(i).data();
    std::fill(oi, oi + d, T{0});
    for (std::size_t j = 0; j < n_kv; ++j) {
      const T w = scratch[j];
      const T* vj = values.data() + j * d;
      for (std::size_t c = 0; c < d; ++c) oi[c] += w * vj[c];
    }
    const T inv = T{1} / total;
    for (std::size_t c = 0; c < d; ++c) oi[c] *= inv;
  }
}

}  // namespace multishot::kernel
