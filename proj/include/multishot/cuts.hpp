// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace multishot {

/// Shot-cut frame indices of a video with `f_total` frames. A cut at t means
/// frame t starts a new shot, so valid cuts lie strictly inside (0, f_total).
struct CutList {
  std::size_t f_total = 0;
  std::vector<std::size_t> cuts;

  friend bool operator==(const CutList&, const CutList&) = default;
};

/// Throws InvalidCutList unless f_total >= 1 and cuts are strictly ascending
/// inside (0, f_total).
void validate_cut_list(const CutList& list);

}  // namespace multishot
