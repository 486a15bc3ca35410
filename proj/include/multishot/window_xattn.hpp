// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "multishot/layout.hpp"
#include "multishot/matrix.hpp"

namespace multishot {

/// Token spans of a concatenated hierarchical prompt: the global prompt, one
/// span per shot prompt, and the `[shot cut]` tag tokens between shot
/// prompts. Tag tokens are never attended to.
struct PromptLayout {
  TokenRange global;
  std::vector<TokenRange> shots;
  std::vector<TokenRange> delimiters;

  std::size_t text_length() const;
};

/// Serializes global first, then each shot prompt, with `delimiter_tokens`
/// tag tokens between consecutive shot prompts.
PromptLayout make_prompt_layout(std::size_t global_tokens,
                                const std::vector<std::size_t>& shot_tokens,
                                std::size_t delimiter_tokens = 0);

/// Throws LayoutMismatch unless all spans are disjoint and jointly cover
/// [0, text_length()).
void validate_prompt_layout(const PromptLayout& prompt);

/// mask[t][k] is true iff text token k is in the global span or in the span of
/// shot_of_token(t). Throws LayoutMismatch when shot counts differ.
BoolMask build_cross_mask(const TokenLayout& video, const PromptLayout& prompt);

/// Cross-attention from video queries to text keys/values, restricted per shot
/// to [global text, own shot text]. Each shot's queries run against a gathered
/// contiguous block, so other shots' text never enters the computation.
template <typename T>
Matrix<T> window_cross_attention(const Matrix<T>& q_video, const Matrix<T>& k_text,
                                 const Matrix<T>& v_text, const TokenLayout& video,
                                 const PromptLayout& prompt);

extern template MatrixD window_cross_attention<double>(const MatrixD&, const MatrixD&,
                                                       const MatrixD&, const TokenLayout&,
                                                       const PromptLayout&);
extern template MatrixF window_cross_attention<float>(const MatrixF&, const MatrixF&,
                                                      const MatrixF&, const TokenLayout&,
                                                      const PromptLayout&);

}  // namespace multishot
