// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/layout.hpp"

#include <algorithm>
#include <string>

#include "multishot/error.hpp"

namespace multishot {

TokenLayout build_token_layout(std::span<const ShotSpec> specs) {
  if (specs.empty()) {
    throw Error(ErrorCode::EmptyLayout, "a layout needs at least one shot");
  }
  TokenLayout layout;
  layout.shots_.assign(specs.begin(), specs.end());
  layout.ranges_.reserve(specs.size());
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ShotSpec& s = specs[i];
    if (s.frames == 0 || s.tokens_per_frame == 0) {
      throw Error(ErrorCode::InvalidShotSpec,
                  "shot " + std::to_string(i) + " has zero frames or tokens per frame");
    }
    layout.ranges_.push_back({cursor, cursor + s.tokens()});
    cursor += s.tokens();
  }
  return layout;
}

TokenLayout uniform_layout(std::size_t n, ShotSpec spec) {
  std::vector<ShotSpec> specs(n, spec);
  return build_token_layout(specs);
}

bool TokenLayout::is_uniform() const {
  return std::all_of(shots_.begin(), shots_.end(),
                     [&](const ShotSpec& s) { return s == shots_.front(); });
}

std::size_t shot_of_token(const TokenLayout& layout, std::size_t token_index) {
  if (token_index >= layout.total_tokens()) {
    throw Error(ErrorCode::IndexOutOfBounds, "token " + std::to_string(token_index) +
                                                 " outside layout of " +
                                                 std::to_string(layout.total_tokens()));
  }
  const auto& ranges = layout.ranges();
  auto it = std::upper_bound(ranges.begin(), ranges.end(), token_index,
                             [](std::size_t idx, const TokenRange& r) { return idx < r.end; });
  return static_cast<std::size_t>(it - ranges.begin());
}

std::string strategy_name(const SummaryStrategy& strategy) {
  switch (strategy.index()) {
    case 0: return "first";
    case 1: return "first-last";
    default: return "explicit";
  }
}

namespace {

std::vector<std::size_t> frame_tokens(const TokenRange& range, const ShotSpec& spec,
                                      std::size_t frame) {
  std::vector<std::size_t> out(spec.tokens_per_frame);
  std::size_t base = range.start + frame * spec.tokens_per_frame;
  for (std::size_t t = 0; t < spec.tokens_per_frame; ++t) out[t] = base + t;
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> summary_token_indices(const TokenLayout& layout,
                                                            const SummaryStrategy& strategy) {
  const std::size_t n = layout.num_shots();
  std::vector<std::vector<std::size_t>> out(n);

  if (std::holds_alternative<FirstFrame>(strategy)) {
    for (std::size_t j = 0; j < n; ++j) out[j] = frame_tokens(layout.range(j), layout.shot(j), 0);
    return out;
  }
  if (std::holds_alternative<FirstAndLastFrame>(strategy)) {
    for (std::size_t j = 0; j < n; ++j) {
      const ShotSpec& spec = layout.shot(j);
      out[j] = frame_tokens(layout.range(j), spec, 0);
      if (spec.frames > 1) {
        auto last = frame_tokens(layout.range(j), spec, spec.frames - 1);
        out[j].insert(out[j].end(), last.begin(), last.end());
      }
    }
    return out;
  }

  const auto& explicit_sel = std::get<ExplicitIndices>(strategy).per_shot;
  if (explicit_sel.size() != n) {
    throw Error(ErrorCode::InvalidSummaryIndex,
                "explicit selection lists " + std::to_string(explicit_sel.size()) +
                    " shots, layout has " + std::to_string(n));
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::size_t> sel = explicit_sel[j];
    if (sel.empty()) {
      throw Error(ErrorCode::InvalidSummaryIndex,
                  "shot " + std::to_string(j) + " has no summary tokens");
    }
    for (std::size_t idx : sel) {
      if (!layout.range(j).contains(idx)) {
        throw Error(ErrorCode::InvalidSummaryIndex,
                    "index " + std::to_string(idx) + " is outside shot " + std::to_string(j));
      }
    }
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    out[j] = std::move(sel);
  }
  return out;
}

}  // namespace multishot
