// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "multishot/cuts.hpp"

namespace multishot {

struct CutPair {
  std::size_t pred_idx = 0;  // position in the predicted list
  std::size_t gt_idx = 0;    // position in the ground-truth list
  std::size_t deviation = 0; // |pred - gt| in frames

  friend bool operator==(const CutPair&, const CutPair&) = default;
};

struct CutMatching {
  std::vector<CutPair> pairs;
  std::size_t unmatched_pred = 0;
  std::size_t unmatched_gt = 0;
  double e_matched = 0.0;
  double e_penalty = 0.0;
};

/// Order-preserving one-to-one matching minimizing
/// sum |p - g| + penalty * (unmatched predicted + unmatched ground truth),
/// solved by an edit-distance style dynamic program. Ties prefer matching.
/// Throws FrameCountMismatch when f_total differs, InvalidConfig when
/// penalty <= 0, InvalidCutList for malformed lists.
CutMatching match_cuts(const CutList& pred, const CutList& gt, double penalty_per_unmatched);

/// Mean ground-truth shot length, f_total / (|gt cuts| + 1).
double default_cut_penalty(const CutList& gt);

struct ScaReport {
  std::size_t f_total = 0;
  double penalty = 0.0;
  CutMatching matching;
  double nsd = 0.0;
  double sca = 1.0;
};

/// sca = exp(-nsd), nsd = (e_matched + e_penalty) / f_total. The penalty
/// defaults to default_cut_penalty(gt).
ScaReport shot_cut_accuracy(const CutList& pred, const CutList& gt,
                            std::optional<double> penalty = std::nullopt);

using Embedding = std::vector<double>;

/// Throws LayoutMismatch on differing dimensions, EmptyInput on empty or zero
/// vectors.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Mean cosine similarity over every unordered within-group pair, pooled over
/// all groups. Throws DegenerateGroup for groups smaller than two (or with a
/// repeated index) and IndexOutOfBounds for unknown shots.
double inter_shot_consistency(const std::vector<Embedding>& shot_vectors,
                              const std::vector<std::vector<std::size_t>>& groups);

/// Mean over frames t >= 1 of (cos(e_t, e_{t-1}) + cos(e_t, e_0)) / 2.
/// Throws TooFewFrames below two frames.
double intra_shot_consistency(const std::vector<Embedding>& frame_vectors);

double semantic_consistency(std::span<const double> prompt_vector,
                            std::span<const double> media_vector);

/// Mean over shots of the prompt/media cosine. Throws LayoutMismatch when the
/// lists differ in length, EmptyInput when they are empty.
double semantic_consistency_per_shot(const std::vector<Embedding>& prompt_vectors,
                                     const std::vector<Embedding>& media_vectors);

}  // namespace multishot
