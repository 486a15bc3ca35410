// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/window_xattn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "multishot/error.hpp"
#include "multishot/kernel.hpp"

namespace multishot {

std::size_t PromptLayout::text_length() const {
  std::size_t end = global.end;
  for (const auto& r : shots) end = std::max(end, r.end);
  for (const auto& r : delimiters) end = std::max(end, r.end);
  return end;
}

PromptLayout make_prompt_layout(std::size_t global_tokens,
                                const std::vector<std::size_t>& shot_tokens,
                                std::size_t delimiter_tokens) {
  PromptLayout p;
  p.global = {0, global_tokens};
  std::size_t cursor = global_tokens;
  for (std::size_t i = 0; i < shot_tokens.size(); ++i) {
    if (i > 0 && delimiter_tokens > 0) {
      p.delimiters.push_back({cursor, cursor + delimiter_tokens});
      cursor += delimiter_tokens;
    }
    p.shots.push_back({cursor, cursor + shot_tokens[i]});
    cursor += shot_tokens[i];
  }
  return p;
}

void validate_prompt_layout(const PromptLayout& prompt) {
  std::vector<TokenRange> spans;
  spans.push_back(prompt.global);
  spans.insert(spans.end(), prompt.shots.begin(), prompt.shots.end());
  spans.insert(spans.end(), prompt.delimiters.begin(), prompt.delimiters.end());
  for (const auto& s : spans) {
    if (s.end < s.start) throw Error(ErrorCode::LayoutMismatch, "prompt span ends before it starts");
  }
  std::erase_if(spans, [](const TokenRange& r) { return r.size() == 0; });
  std::sort(spans.begin(), spans.end(),
            [](const TokenRange& a, const TokenRange& b) { return a.start < b.start; });
  std::size_t cursor = 0;
  for (const auto& s : spans) {
    if (s.start != cursor) {
      throw Error(ErrorCode::LayoutMismatch,
                  "prompt spans overlap or leave a gap at token " + std::to_string(cursor));
    }
    cursor = s.end;
  }
}

namespace {

void check_counts(const TokenLayout& video, const PromptLayout& prompt) {
  if (prompt.shots.size() != video.num_shots()) {
    throw Error(ErrorCode::LayoutMismatch,
                "prompt has " + std::to_string(prompt.shots.size()) + " shot spans, video has " +
                    std::to_string(video.num_shots()) + " shots");
  }
  validate_prompt_layout(prompt);
}

}  // namespace

BoolMask build_cross_mask(const TokenLayout& video, const PromptLayout& prompt) {
  check_counts(video, prompt);
  BoolMask mask(video.total_tokens(), prompt.text_length());
  for (std::size_t s = 0; s < video.num_shots(); ++s) {
    const TokenRange& own = prompt.shots[s];
    const TokenRange& rows = video.range(s);
    for (std::size_t t = rows.start; t < rows.end; ++t) {
      for (std::size_t k = prompt.global.start; k < prompt.global.end; ++k) mask.set(t, k);
      for (std::size_t k = own.start; k < own.end; ++k) mask.set(t, k);
    }
  }
  return mask;
}

template <typename T>
Matrix<T> window_cross_attention(const Matrix<T>& q_video, const Matrix<T>& k_text,
                                 const Matrix<T>& v_text, const TokenLayout& video,
                                 const PromptLayout& prompt) {
  check_counts(video, prompt);
  const std::size_t d = q_video.cols();
  if (q_video.rows() != video.total_tokens() || k_text.rows() != prompt.text_length() ||
      v_text.rows() != k_text.rows() || k_text.cols() != d || v_text.cols() != d) {
    throw Error(ErrorCode::ShapeMismatch, "video/text matrices do not match their layouts");
  }
  if (!q_video.all_finite() || !k_text.all_finite() || !v_text.all_finite()) {
    throw Error(ErrorCode::NonFiniteInput, "attention inputs must be finite");
  }

  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d)));
  Matrix<T> out(q_video.rows(), d);
  std::vector<T> keys, values, scratch;
  for (std::size_t s = 0; s < video.num_shots(); ++s) {
    keys.clear();
    values.clear();
    for (const TokenRange& span : {prompt.global, prompt.shots[s]}) {
      for (std::size_t k = span.start; k < span.end; ++k) {
        auto kr = k_text.row(k);
        auto vr = v_text.row(k);
        keys.insert(keys.end(), kr.begin(), kr.end());
        values.insert(values.end(), vr.begin(), vr.end());
      }
    }
    const std::size_t n_kv = keys.size() / d;
    const TokenRange& rows = video.range(s);
    if (n_kv == 0 && rows.size() > 0) {
      throw Error(ErrorCode::EmptyAttentionRow,
                  "shot " + std::to_string(s) + " has neither global nor own prompt tokens");
    }
    kernel::attend_block<T>(q_video, rows.start, rows.end, keys, values, n_kv, scale, out,
                            scratch);
  }
  return out;
}

template MatrixD window_cross_attention<double>(const MatrixD&, const MatrixD&, const MatrixD&,
                                                const TokenLayout&, const PromptLayout&);
template MatrixF window_cross_attention<float>(const MatrixF&, const MatrixF&, const MatrixF&,
                                               const TokenLayout&, const PromptLayout&);

}  // namespace multishot
