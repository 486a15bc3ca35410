// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/curation.hpp"

#include <cmath>

#include "multishot/error.hpp"

namespace multishot {

void validate_cut_list(const CutList& list) {
  if (list.f_total == 0) throw Error(ErrorCode::InvalidCutList, "f_total must be positive");
  std::size_t prev = 0;
  for (std::size_t c : list.cuts) {
    if (c <= prev || c >= list.f_total) {
      throw Error(ErrorCode::InvalidCutList,
                  "cut " + std::to_string(c) + " is out of order or outside (0, " +
                      std::to_string(list.f_total) + ")");
    }
    prev = c;
  }
}

void validate_source_shot(const SourceShot& shot) {
  if (shot.end_frame <= shot.start_frame) {
    throw Error(ErrorCode::ParseError, "shot " + shot.id + " ends before it starts");
  }
  if (!(shot.fps > 0.0) || !std::isfinite(shot.fps)) {
    throw Error(ErrorCode::ParseError, "shot " + shot.id + " has non-positive fps");
  }
  if (!(shot.mean_luminance >= 0.0 && shot.mean_luminance <= 1.0)) {
    throw Error(ErrorCode::ParseError, "shot " + shot.id + " luminance outside [0, 1]");
  }
}

CutList detect_cuts(std::span<const double> frame_signal, double threshold) {
  if (frame_signal.empty()) throw Error(ErrorCode::EmptyInput, "frame signal is empty");
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidConfig, "threshold must be positive");
  CutList out{frame_signal.size(), {}};
  for (std::size_t t = 1; t < frame_signal.size(); ++t) {
    if (std::abs(frame_signal[t] - frame_signal[t - 1]) > threshold) out.cuts.push_back(t);
  }
  return out;
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::TooShort: return "TooShort";
    case RejectReason::TooDark: return "TooDark";
    case RejectReason::LowAesthetic: return "LowAesthetic";
  }
  return "Unknown";
}

FilterResult filter_shots(std::span<const SourceShot> shots, const FilterPolicy& policy) {
  FilterResult result;
  for (const SourceShot& s : shots) {
    if (s.duration_seconds() < policy.min_duration_s) {
      result.rejected.push_back({s, RejectReason::TooShort});
    } else if (s.mean_luminance < policy.min_luminance) {
      result.rejected.push_back({s, RejectReason::TooDark});
    } else if (s.aesthetic_score && *s.aesthetic_score < policy.min_aesthetic) {
      result.rejected.push_back({s, RejectReason::LowAesthetic});
    } else {
      result.kept.push_back(s);
    }
  }
  return result;
}

std::vector<CurationSample> assemble_samples(std::span<const SourceShot> shots, double target_s,
                                             double tol_s, std::size_t max_shots) {
  if (!(target_s > tol_s) || !(tol_s >= 0.0) || max_shots == 0) {
    throw Error(ErrorCode::InvalidConfig, "need target > tolerance >= 0 and max_shots >= 1");
  }
  const double lower = target_s - tol_s;
  const double upper = target_s + tol_s;

  std::vector<CurationSample> out;
  CurationSample group;
  group.tier = target_s;

  auto close = [&] {
    if (!group.shots.empty() && group.total_duration >= lower && group.total_duration <= upper &&
        group.shots.size() <= max_shots) {
      out.push_back(std::move(group));
    }
    group = CurationSample{};
    group.tier = target_s;
  };

  for (const SourceShot& s : shots) {
    if (!group.shots.empty()) {
      const SourceShot& prev = group.shots.back();
      if (s.source_id != prev.source_id || s.start_frame != prev.end_frame) close();
    }
    group.shots.push_back(s);
    group.total_duration += s.duration_seconds();
    if (group.total_duration >= lower) close();
  }
  return out;
}

bool attach_prompt(CurationSample& sample, const std::string& global_text) {
  HierarchicalPrompt prompt{global_text, {}};
  for (const SourceShot& s : sample.shots) {
    if (!s.caption) return false;
    prompt.per_shot.push_back(*s.caption);
  }
  validate_prompt(prompt);
  sample.prompt = std::move(prompt);
  return true;
}

void validate_prompt(const HierarchicalPrompt& prompt) {
  if (prompt.per_shot.empty()) throw Error(ErrorCode::MalformedPrompt, "prompt has no shots");
  if (prompt.global.find(kShotCutTag) != std::string::npos ||
      prompt.global.find('\n') != std::string::npos) {
    throw Error(ErrorCode::DelimiterCollision,
                "global text contains a newline or the shot cut tag");
  }
  for (std::size_t i = 0; i < prompt.per_shot.size(); ++i) {
    const std::string& text = prompt.per_shot[i];
    if (text.empty()) {
      throw Error(ErrorCode::MalformedPrompt, "shot " + std::to_string(i) + " text is empty");
    }
    if (text.find(kShotCutTag) != std::string::npos) {
      throw Error(ErrorCode::DelimiterCollision,
                  "shot " + std::to_string(i) + " text contains the shot cut tag");
    }
  }
}

std::string render_hierarchical_prompt(const HierarchicalPrompt& prompt) {
  validate_prompt(prompt);
  std::string out = prompt.global;
  out += '\n';
  for (std::size_t i = 0; i < prompt.per_shot.size(); ++i) {
    if (i > 0) out += kShotCutDelimiter;
    out += prompt.per_shot[i];
  }
  return out;
}

HierarchicalPrompt parse_hierarchical_prompt(std::string_view text) {
  const auto newline = text.find('\n');
  if (newline == std::string_view::npos) {
    throw Error(ErrorCode::MalformedPrompt, "missing newline after the global prompt");
  }
  HierarchicalPrompt prompt;
  prompt.global = std::string(text.substr(0, newline));
  std::string_view rest = text.substr(newline + 1);
  while (true) {
    const auto pos = rest.find(kShotCutDelimiter);
    std::string_view segment = rest.substr(0, pos);
    if (segment.empty()) throw Error(ErrorCode::MalformedPrompt, "empty shot segment");
    prompt.per_shot.emplace_back(segment);
    if (pos == std::string_view::npos) break;
    rest = rest.substr(pos + kShotCutDelimiter.size());
  }
  validate_prompt(prompt);
  return prompt;
}

}  // namespace multishot
