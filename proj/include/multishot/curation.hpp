// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multishot/cuts.hpp"

namespace multishot {

/// One detected shot of a source video. Frames are [start_frame, end_frame).
struct SourceShot {
  std::string id;
  std::string source_id;
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 1;
  double fps = 24.0;
  double mean_luminance = 0.5;
  std::optional<double> aesthetic_score;
  std::optional<std::string> caption;

  double duration_seconds() const { return static_cast<double>(end_frame - start_frame) / fps; }
  friend bool operator==(const SourceShot&, const SourceShot&) = default;
};

/// Throws ParseError when end_frame <= start_frame, fps <= 0, or luminance
/// falls outside [0, 1].
void validate_source_shot(const SourceShot& shot);

/// Stand-in shot boundary detector over a per-frame scalar signal (for
/// example mean luminance): a cut at t wherever |s[t] - s[t-1]| > threshold.
CutList detect_cuts(std::span<const double> frame_signal, double threshold);

struct FilterPolicy {
  double min_duration_s = 1.0;
  double min_luminance = 0.05;
  double min_aesthetic = 4.5;
};

enum class RejectReason { TooShort, TooDark, LowAesthetic };
std::string_view to_string(RejectReason reason);

struct RejectedShot {
  SourceShot shot;
  RejectReason reason;  // first rule that failed
};

struct FilterResult {
  std::vector<SourceShot> kept;
  std::vector<RejectedShot> rejected;
};

/// Shots without an aesthetic score pass the aesthetic rule.
FilterResult filter_shots(std::span<const SourceShot> shots, const FilterPolicy& policy);

inline constexpr std::size_t kMaxShotsPerSample = 13;
inline constexpr std::array<double, 3> kDefaultTiersSeconds = {5.0, 15.0, 60.0};
inline constexpr double kDefaultToleranceFraction = 0.2;

inline double default_tolerance(double target_s) { return kDefaultToleranceFraction * target_s; }

/// Global scene description plus ordered per-shot descriptions.
struct HierarchicalPrompt {
  std::string global;
  std::vector<std::string> per_shot;

  friend bool operator==(const HierarchicalPrompt&, const HierarchicalPrompt&) = default;
};

struct CurationSample {
  std::vector<SourceShot> shots;
  double total_duration = 0.0;
  double tier = 0.0;
  std::optional<HierarchicalPrompt> prompt;
};

/// Greedy left-to-right grouping of contiguous shots into duration tiers.
///
/// Shots accumulate until the group reaches target - tol; the group then
/// closes and is kept only if it is within target + tol and holds at most
/// `max_shots` shots. A gap or source change closes the open group under the
/// same rule. Trailing groups that never reach the threshold are dropped.
/// Throws InvalidConfig unless target_s > tol_s >= 0 and max_shots >= 1.
std::vector<CurationSample> assemble_samples(std::span<const SourceShot> shots, double target_s,
                                             double tol_s,
                                             std::size_t max_shots = kMaxShotsPerSample);

/// Attaches a hierarchical prompt built from the shot captions when every shot
/// has one. Returns false (and leaves the sample untouched) otherwise.
bool attach_prompt(CurationSample& sample, const std::string& global_text);

inline constexpr std::string_view kShotCutTag = "[shot cut]";
inline constexpr std::string_view kShotCutDelimiter = " [shot cut] ";

/// Throws MalformedPrompt when there are no shots, DelimiterCollision when a
/// field contains the tag or the global text contains a newline.
void validate_prompt(const HierarchicalPrompt& prompt);

/// `global + "\n" + join(per_shot, " [shot cut] ")`.
std::string render_hierarchical_prompt(const HierarchicalPrompt& prompt);

/// Inverse of render_hierarchical_prompt on its image.
HierarchicalPrompt parse_hierarchical_prompt(std::string_view text);

}  // namespace multishot
