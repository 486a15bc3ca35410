// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace multishot {

/// Latent geometry of one shot: `frames` latent frames of `tokens_per_frame`
/// spatial tokens each.
struct ShotSpec {
  std::size_t frames = 1;
  std::size_t tokens_per_frame = 1;

  std::size_t tokens() const { return frames * tokens_per_frame; }
  friend bool operator==(const ShotSpec&, const ShotSpec&) = default;
};

/// Half-open span [start, end) over a flattened token sequence.
struct TokenRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(std::size_t i) const { return i >= start && i < end; }
  friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

/// Shot-major, frame-major, then spatial flattening of a multi-shot latent
/// sequence. Immutable; construct with build_token_layout().
class TokenLayout {
 public:
  std::size_t num_shots() const { return shots_.size(); }
  std::size_t total_tokens() const { return ranges_.empty() ? 0 : ranges_.back().end; }
  const std::vector<ShotSpec>& shots() const { return shots_; }
  const std::vector<TokenRange>& ranges() const { return ranges_; }
  const ShotSpec& shot(std::size_t i) const { return shots_.at(i); }
  const TokenRange& range(std::size_t i) const { return ranges_.at(i); }

  /// True when every shot has the same frames and tokens_per_frame.
  bool is_uniform() const;

  friend TokenLayout build_token_layout(std::span<const ShotSpec> specs);

 private:
  std::vector<ShotSpec> shots_;
  std::vector<TokenRange> ranges_;
};

/// Throws EmptyLayout for an empty list, InvalidShotSpec for zero counts.
TokenLayout build_token_layout(std::span<const ShotSpec> specs);

/// `n` copies of `spec`.
TokenLayout uniform_layout(std::size_t n, ShotSpec spec);

/// Binary search over the shot ranges. Throws IndexOutOfBounds past L.
std::size_t shot_of_token(const TokenLayout& layout, std::size_t token_index);

struct FirstFrame {};
struct FirstAndLastFrame {};
/// Absolute token indices per shot; emulates any externally chosen selection.
struct ExplicitIndices {
  std::vector<std::vector<std::size_t>> per_shot;
};

using SummaryStrategy = std::variant<FirstFrame, FirstAndLastFrame, ExplicitIndices>;

std::string strategy_name(const SummaryStrategy& strategy);

/// Per-shot summary token indices, ascending and duplicate-free.
/// Throws InvalidSummaryIndex when an explicit selection is empty, has the
/// wrong shot count, or strays outside its shot.
std::vector<std::vector<std::size_t>> summary_token_indices(const TokenLayout& layout,
                                                            const SummaryStrategy& strategy);

}  // namespace multishot
