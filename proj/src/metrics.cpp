// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "multishot/error.hpp"

namespace multishot {

namespace {

std::size_t frame_distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

CutMatching match_cuts(const CutList& pred, const CutList& gt, double penalty_per_unmatched) {
  if (pred.f_total != gt.f_total) {
    throw Error(ErrorCode::FrameCountMismatch, "predicted video has " +
                                                   std::to_string(pred.f_total) +
                                                   " frames, ground truth " +
                                                   std::to_string(gt.f_total));
  }
  if (!(penalty_per_unmatched > 0.0) || !std::isfinite(penalty_per_unmatched)) {
    throw Error(ErrorCode::InvalidConfig, "unmatched-cut penalty must be positive and finite");
  }
  validate_cut_list(pred);
  validate_cut_list(gt);

  const std::size_t n = pred.cuts.size();
  const std::size_t m = gt.cuts.size();
  const double pen = penalty_per_unmatched;
  enum Step : unsigned char { kMatch, kSkipPred, kSkipGt };
  // cost[i][j]: best cost aligning the first i predicted and j ground-truth
  // cuts; step[i][j] records the move that achieved it.
  std::vector<double> cost((n + 1) * (m + 1));
  std::vector<Step> step((n + 1) * (m + 1), kMatch);
  auto at = [&](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (std::size_t i = 1; i <= n; ++i) {
    cost[at(i, 0)] = cost[at(i - 1, 0)] + pen;
    step[at(i, 0)] = kSkipPred;
  }
  for (std::size_t j = 1; j <= m; ++j) {
    cost[at(0, j)] = cost[at(0, j - 1)] + pen;
    step[at(0, j)] = kSkipGt;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      double best = cost[at(i - 1, j - 1)] +
                    static_cast<double>(frame_distance(pred.cuts[i - 1], gt.cuts[j - 1]));
      Step how = kMatch;
      if (cost[at(i - 1, j)] + pen < best) {
        best = cost[at(i - 1, j)] + pen;
        how = kSkipPred;
      }
      if (cost[at(i, j - 1)] + pen < best) {
        best = cost[at(i, j - 1)] + pen;
        how = kSkipGt;
      }
      cost[at(i, j)] = best;
      step[at(i, j)] = how;
    }
  }

  CutMatching result;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    switch (step[at(i, j)]) {
      case kMatch:
        result.pairs.push_back({i - 1, j - 1, frame_distance(pred.cuts[i - 1], gt.cuts[j - 1])});
        --i;
        --j;
        break;
      case kSkipPred:
        ++result.unmatched_pred;
        --i;
        break;
      case kSkipGt:
        ++result.unmatched_gt;
        --j;
        break;
    }
  }
  std::reverse(result.pairs.begin(), result.pairs.end());
  for (const CutPair& p : result.pairs) result.e_matched += static_cast<double>(p.deviation);
  result.e_penalty = pen * static_cast<double>(result.unmatched_pred + result.unmatched_gt);
  return result;
}

double default_cut_penalty(const CutList& gt) {
  return static_cast<double>(gt.f_total) / static_cast<double>(gt.cuts.size() + 1);
}

ScaReport shot_cut_accuracy(const CutList& pred, const CutList& gt, std::optional<double> penalty) {
  ScaReport report;
  report.f_total = gt.f_total;
  report.penalty = penalty.value_or(default_cut_penalty(gt));
  report.matching = match_cuts(pred, gt, report.penalty);
  report.nsd = (report.matching.e_matched + report.matching.e_penalty) /
               static_cast<double>(report.f_total);
  report.sca = std::exp(-report.nsd);
  return report;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LayoutMismatch, "embedding dimensions differ");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::EmptyInput, "zero or empty embedding");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double inter_shot_consistency(const std::vector<Embedding>& shot_vectors,
                              const std::vector<std::vector<std::size_t>>& groups) {
  if (groups.empty()) throw Error(ErrorCode::DegenerateGroup, "no character groups given");
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& group = groups[g];
    if (group.size() < 2) {
      throw Error(ErrorCode::DegenerateGroup,
                  "group " + std::to_string(g) + " has fewer than two shots");
    }
    for (std::size_t idx : group) {
      if (idx >= shot_vectors.size()) {
        throw Error(ErrorCode::IndexOutOfBounds, "group " + std::to_string(g) +
                                                     " references unknown shot " +
                                                     std::to_string(idx));
      }
    }
    auto sorted = group;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::DegenerateGroup, "group " + std::to_string(g) + " repeats a shot");
    }
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        total += cosine_similarity(shot_vectors[group[a]], shot_vectors[group[b]]);
        ++pairs;
      }
    }
  }
  return total / static_cast<double>(pairs);
}

double intra_shot_consistency(const std::vector<Embedding>& frame_vectors) {
  if (frame_vectors.size() < 2) {
    throw Error(ErrorCode::TooFewFrames, "need at least two frames");
  }
  double total = 0.0;
  for (std::size_t t = 1; t < frame_vectors.size(); ++t) {
    total += 0.5 * (cosine_similarity(frame_vectors[t], frame_vectors[t - 1]) +
                    cosine_similarity(frame_vectors[t], frame_vectors[0]));
  }
  return total / static_cast<double>(frame_vectors.size() - 1);
}

double semantic_consistency(std::span<const double> prompt_vector,
                            std::span<const double> media_vector) {
  return cosine_similarity(prompt_vector, media_vector);
}

double semantic_consistency_per_shot(const std::vector<Embedding>& prompt_vectors,
                                     const std::vector<Embedding>& media_vectors) {
  if (prompt_vectors.size() != media_vectors.size()) {
    throw Error(ErrorCode::LayoutMismatch, "prompt and media lists differ in length");
  }
  if (prompt_vectors.empty()) throw Error(ErrorCode::EmptyInput, "no shots to score");
  double total = 0.0;
  for (std::size_t i = 0; i < prompt_vectors.size(); ++i) {
    total += cosine_similarity(prompt_vectors[i], media_vectors[i]);
  }
  return total / static_cast<double>(prompt_vectors.size());
}

}  // namespace multishot
