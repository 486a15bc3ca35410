// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multishot/layout.hpp"
#include "multishot/matrix.hpp"

namespace multishot {

/// How a shot's own summary tokens enter its key/value list.
///  - Dedupe: other shots' summaries united with the shot's own tokens; every
///    key appears once, so the plan is expressible as a boolean mask.
///  - Literal: every shot's summary (including its own) followed by the
///    shot's own tokens; the shot's summary keys appear twice.
enum class PlanMode { Dedupe, Literal };

std::string to_string(PlanMode mode);
PlanMode parse_plan_mode(const std::string& text);

/// Per-shot key/value index lists for inter-shot sparse self-attention, plus
/// cumulative offsets of the packed variable-length segments.
///
/// Fields are public so that tests and the verification harness can build
/// deliberately corrupted plans; pack_varlen() rejects indices outside the
/// layout.
struct SparsePlan {
  TokenLayout layout;
  SummaryStrategy strategy;
  PlanMode mode = PlanMode::Dedupe;
  std::vector<std::vector<std::size_t>> summaries;
  std::vector<std::vector<std::size_t>> kv;
  std::vector<std::size_t> offsets;  // kv.size() + 1 entries, offsets[0] == 0

  std::size_t num_shots() const { return kv.size(); }
  std::size_t total_kv() const { return offsets.empty() ? 0 : offsets.back(); }
  void recompute_offsets();
};

/// Single-shot layouts yield exactly the shot's own tokens in either mode.
SparsePlan build_sparse_plan(const TokenLayout& layout, const SummaryStrategy& strategy,
                             PlanMode mode = PlanMode::Dedupe);

/// Per-shot gathered keys and values, concatenated without padding.
/// Segment i occupies rows [offsets[i], offsets[i+1]).
template <typename T>
struct PackedKV {
  Matrix<T> keys;
  Matrix<T> values;
  std::vector<std::size_t> offsets;
};

template <typename T>
PackedKV<T> pack_varlen(const SparsePlan& plan, const Matrix<T>& k, const Matrix<T>& v);

/// Attention of each shot's queries against its packed key/value segment.
template <typename T>
Matrix<T> sparse_self_attention(const Matrix<T>& q, const Matrix<T>& k, const Matrix<T>& v,
                                const SparsePlan& plan);

/// Boolean mask equivalent of a Dedupe plan. Throws UnrepresentableAsMask for
/// Literal plans.
BoolMask plan_to_dense_mask(const SparsePlan& plan);

struct FlopReport {
  std::vector<std::uint64_t> per_shot;
  std::uint64_t total = 0;
  /// Present when every shot has the same length and summary count.
  std::optional<std::uint64_t> closed_form;
};

/// Dedupe: 4 * N * L_shot * (L_shot + (N - 1) * S) * d.
/// Literal: 4 * N * L_shot * (L_shot + N * S) * d (single shot: 4 * L_shot^2 * d).
std::uint64_t sparse_flops_closed_form(PlanMode mode, std::uint64_t n_shots,
                                       std::uint64_t l_shot, std::uint64_t s, std::uint64_t d);

FlopReport sparse_flops(const SparsePlan& plan, std::size_t d);

/// One JSON object per shot and line: shot, queries [start, end), summary, kv.
std::string plan_manifest(const SparsePlan& plan);

extern template PackedKV<double> pack_varlen<double>(const SparsePlan&, const MatrixD&,
                                                     const MatrixD&);
extern template PackedKV<float> pack_varlen<float>(const SparsePlan&, const MatrixF&,
                                                   const MatrixF&);
extern template MatrixD sparse_self_attention<double>(const MatrixD&, const MatrixD&,
                                                      const MatrixD&, const SparsePlan&);
extern template MatrixF sparse_self_attention<float>(const MatrixF&, const MatrixF&,
                                                     const MatrixF&, const SparsePlan&);

}  // namespace multishot
