// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

// Line-delimited JSON and JSON file formats used by the CLI. Every reader
// throws Error(ParseError) with a line or field hint on malformed input.

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "multishot/curation.hpp"
#include "multishot/cuts.hpp"
#include "multishot/metrics.hpp"

namespace multishot::io {

/// One shot per line: {id, source_id, start_frame, end_frame, fps,
/// mean_luminance, aesthetic_score?, caption?}. Blank lines are skipped.
std::vector<SourceShot> read_shot_manifest(std::istream& in);
void write_shot_manifest(std::ostream& out, const std::vector<SourceShot>& shots);

/// One sample per line: {sample_id, tier_s, total_duration_s, shot_ids,
/// prompt_text?}. Sample ids are "<source_id>/<tier>s/<n>" with n counting
/// samples of that tier from 0.
void write_samples(std::ostream& out, const std::vector<CurationSample>& samples);

/// {"f_total": int, "cuts": [int, ...]}
CutList read_cut_list(std::istream& in);
void write_cut_list(std::ostream& out, const CutList& list);

/// Either a JSON array of numbers or one number per line.
std::vector<double> read_frame_signal(std::istream& in);

/// JSON object mapping segment id to an array of numbers.
std::map<std::string, Embedding> read_embeddings(std::istream& in);

std::string sca_report_json(const ScaReport& report, const CutList& pred, const CutList& gt);

}  // namespace multishot::io
