// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only reference implementations. None of these share code with the
// library paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <vector>

#include "multishot/cuts.hpp"
#include "multishot/layout.hpp"
#include "multishot/matrix.hpp"

namespace oracle {

using multishot::MatrixD;

/// Textbook attention: exp without shifting, then normalize. Only for inputs
/// of modest magnitude.
inline MatrixD naive_attention(const MatrixD& q, const MatrixD& k, const MatrixD& v,
                               double scale) {
  MatrixD out(q.rows(), v.cols());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    std::vector<double> w(k.rows());
    double z = 0.0;
    for (std::size_t j = 0; j < k.rows(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < q.cols(); ++c) s += q(i, c) * k(j, c);
      w[j] = std::exp(scale * s);
      z += w[j];
    }
    for (std::size_t j = 0; j < k.rows(); ++j) {
      for (std::size_t c = 0; c < v.cols(); ++c) out(i, c) += w[j] / z * v(j, c);
    }
  }
  return out;
}

inline std::size_t linear_scan_shot(const multishot::TokenLayout& layout, std::size_t idx) {
  for (std::size_t s = 0; s < layout.num_shots(); ++s) {
    if (layout.range(s).start <= idx && idx < layout.range(s).end) return s;
  }
  return std::numeric_limits<std::size_t>::max();
}

struct MatchCost {
  double total = std::numeric_limits<double>::infinity();
  double e_matched = 0.0;
  double e_penalty = 0.0;
};

/// Enumerates every order-preserving one-to-one matching between the two
/// ascending lists (equal-size subsets paired in order) and returns the
/// cheapest.
inline MatchCost exhaustive_matching(const std::vector<std::size_t>& pred,
                                     const std::vector<std::size_t>& gt, double penalty) {
  MatchCost best;
  const std::size_t n = pred.size(), m = gt.size();
  for (unsigned pm = 0; pm < (1u << n); ++pm) {
    for (unsigned gm = 0; gm < (1u << m); ++gm) {
      if (__builtin_popcount(pm) != __builtin_popcount(gm)) continue;
      std::vector<std::size_t> ps, gs;
      for (std::size_t i = 0; i < n; ++i)
        if (pm >> i & 1u) ps.push_back(pred[i]);
      for (std::size_t j = 0; j < m; ++j)
        if (gm >> j & 1u) gs.push_back(gt[j]);
      double matched = 0.0;
      for (std::size_t t = 0; t < ps.size(); ++t) {
        matched += static_cast<double>(ps[t] > gs[t] ? ps[t] - gs[t] : gs[t] - ps[t]);
      }
      const double pen = penalty * static_cast<double>(n + m - 2 * ps.size());
      if (matched + pen < best.total) best = {matched + pen, matched, pen};
    }
  }
  return best;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return d / std::sqrt(na * nb);
}

}  // namespace oracle
