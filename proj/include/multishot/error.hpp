// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace multishot {

enum class ErrorCode {
  EmptyLayout,
  InvalidShotSpec,
  IndexOutOfBounds,
  InvalidSummaryIndex,
  EmptyInput,
  NonFiniteInput,
  ShapeMismatch,
  EmptyAttentionRow,
  LayoutMismatch,
  PlanLayoutMismatch,
  UnrepresentableAsMask,
  DelimiterCollision,
  MalformedPrompt,
  FrameCountMismatch,
  InvalidCutList,
  DegenerateGroup,
  TooFewFrames,
  ConfigTooLarge,
  InvalidConfig,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable code. All library failures throw this.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace multishot
