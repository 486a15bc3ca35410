// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/error.hpp"

namespace multishot {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyLayout: return "EmptyLayout";
    case ErrorCode::InvalidShotSpec: return "InvalidShotSpec";
    case ErrorCode::IndexOutOfBounds: return "IndexOutOfBounds";
    case ErrorCode::InvalidSummaryIndex: return "InvalidSummaryIndex";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::EmptyAttentionRow: return "EmptyAttentionRow";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::PlanLayoutMismatch: return "PlanLayoutMismatch";
    case ErrorCode::UnrepresentableAsMask: return "UnrepresentableAsMask";
    case ErrorCode::DelimiterCollision: return "DelimiterCollision";
    case ErrorCode::MalformedPrompt: return "MalformedPrompt";
    case ErrorCode::FrameCountMismatch: return "FrameCountMismatch";
    case ErrorCode::InvalidCutList: return "InvalidCutList";
    case ErrorCode::DegenerateGroup: return "DegenerateGroup";
    case ErrorCode::TooFewFrames: return "TooFewFrames";
    case ErrorCode::ConfigTooLarge: return "ConfigTooLarge";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace multishot
