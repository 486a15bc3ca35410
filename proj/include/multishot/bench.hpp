// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multishot/layout.hpp"
#include "multishot/sparse_attn.hpp"

namespace multishot {

enum class Precision { Double, Single };

std::string to_string(Precision p);
Precision parse_precision(const std::string& text);

/// Parses "first" / "first-last".
SummaryStrategy parse_strategy(const std::string& text);

struct BenchConfig {
  std::vector<std::size_t> n_shots = {2, 4, 8};
  ShotSpec shot = {16, 16};
  SummaryStrategy strategy = FirstFrame{};
  PlanMode mode = PlanMode::Dedupe;
  std::size_t d = 32;
  Precision precision = Precision::Single;
  std::size_t repetitions = 3;
  std::uint64_t seed = 0;
  /// Largest dense sequence length the harness will time.
  std::size_t max_dense_tokens = 32768;
  /// When false only the FLOP columns are produced; wall times stay NaN.
  bool measure_time = true;
};

/// Throws InvalidConfig for zero counts, ConfigTooLarge when a timed point
/// exceeds max_dense_tokens.
void validate_bench_config(const BenchConfig& config);

struct BenchRow {
  std::size_t n_shots = 0;
  std::size_t l_shot = 0;
  std::size_t tpf = 0;
  std::size_t s = 0;
  std::size_t d = 0;
  PlanMode mode = PlanMode::Dedupe;
  Precision precision = Precision::Single;
  std::uint64_t flops_sparse = 0;
  std::uint64_t flops_dense = 0;
  double wall_ms_sparse = 0.0;
  double wall_ms_dense = 0.0;
};

/// One row per n_shots entry, in config order. FLOPs come from the exact
/// per-plan counters; wall times are medians over repetitions. Inputs are
/// standard normal draws from Rng(seed + n_shots).
std::vector<BenchRow> bench_scaling(const BenchConfig& config);

inline constexpr const char* kBenchCsvHeader =
    "n_shots,l_shot,tpf,s,d,mode,precision,flops_sparse,flops_dense,wall_ms_sparse,wall_ms_dense";

std::string bench_csv(const std::vector<BenchRow>& rows);

struct VerifyConfig {
  std::uint64_t seed = 0;
  std::size_t cases = 100;
  std::size_t max_shots = 6;
  std::size_t max_frames = 4;
  std::size_t max_tpf = 8;
  std::size_t min_d = 4;
  std::size_t max_d = 32;
  /// Upper bound on the window cross-attention text length.
  std::size_t max_text = 32;
  Precision precision = Precision::Double;
  /// Drops one foreign summary index from one shot's KV list in every case.
  bool inject_fault = false;
};

struct VerifyFailure {
  std::string check;  // "sparse" or "window"
  std::size_t case_index = 0;
  std::size_t query_shot = 0;
  /// Shot owning a key that differs between the plan and the reference
  /// pattern, when one can be identified.
  std::optional<std::size_t> key_shot;
  double max_abs_diff = 0.0;
};

struct VerifyReport {
  std::size_t cases = 0;
  double tolerance = 0.0;
  double max_diff_sparse = 0.0;
  double max_diff_window = 0.0;
  std::vector<VerifyFailure> failures;
  bool passed() const { return failures.empty(); }
};

/// 1e-10 in double precision, 1e-5 in single.
double verify_tolerance(Precision p);

/// Randomized sparse-vs-masked-dense and window-vs-masked-dense checks. Case
/// k alternates FirstFrame and FirstAndLastFrame summaries and draws its own
/// shapes and values from Rng(seed + k).
VerifyReport verify_equivalence(const VerifyConfig& config);

std::string verify_report_json(const VerifyReport& report);

}  // namespace multishot
