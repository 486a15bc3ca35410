// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "multishot/error.hpp"

namespace multishot::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(where + ": " + e.what());
  }
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + ": field '" + key + "': " + e.what());
  }
}

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_tier(double tier) {
  std::ostringstream ss;
  ss << tier;
  return ss.str();
}

}  // namespace

std::vector<SourceShot> read_shot_manifest(std::istream& in) {
  std::vector<SourceShot> shots;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "manifest line " + std::to_string(lineno);
    json rec = parse_json(line, where);
    if (!rec.is_object()) fail(where + ": expected an object");
    SourceShot s;
    s.id = field<std::string>(rec, "id", where);
    s.source_id = field<std::string>(rec, "source_id", where);
    s.start_frame = field<std::int64_t>(rec, "start_frame", where);
    s.end_frame = field<std::int64_t>(rec, "end_frame", where);
    s.fps = field<double>(rec, "fps", where);
    s.mean_luminance = field<double>(rec, "mean_luminance", where);
    if (rec.contains("aesthetic_score") && !rec["aesthetic_score"].is_null()) {
      s.aesthetic_score = field<double>(rec, "aesthetic_score", where);
    }
    if (rec.contains("caption") && !rec["caption"].is_null()) {
      s.caption = field<std::string>(rec, "caption", where);
    }
    try {
      validate_source_shot(s);
    } catch (const Error& e) {
      fail(where + ": " + e.what());
    }
    shots.push_back(std::move(s));
  }
  return shots;
}

void write_shot_manifest(std::ostream& out, const std::vector<SourceShot>& shots) {
  for (const SourceShot& s : shots) {
    json rec = {{"id", s.id},
                {"source_id", s.source_id},
                {"start_frame", s.start_frame},
                {"end_frame", s.end_frame},
                {"fps", s.fps},
                {"mean_luminance", s.mean_luminance}};
    if (s.aesthetic_score) rec["aesthetic_score"] = *s.aesthetic_score;
    if (s.caption) rec["caption"] = *s.caption;
    out << rec.dump() << '\n';
  }
}

void write_samples(std::ostream& out, const std::vector<CurationSample>& samples) {
  std::map<std::string, std::size_t> counters;
  for (const CurationSample& sample : samples) {
    const std::string source = sample.shots.empty() ? "" : sample.shots.front().source_id;
    const std::string prefix = source + "/" + format_tier(sample.tier) + "s";
    json rec = {{"sample_id", prefix + "/" + std::to_string(counters[prefix]++)},
                {"tier_s", sample.tier},
                {"total_duration_s", sample.total_duration}};
    json ids = json::array();
    for (const SourceShot& s : sample.shots) ids.push_back(s.id);
    rec["shot_ids"] = ids;
    if (sample.prompt) rec["prompt_text"] = render_hierarchical_prompt(*sample.prompt);
    out << rec.dump() << '\n';
  }
}

CutList read_cut_list(std::istream& in) {
  json doc = parse_json(slurp(in), "cut list");
  if (!doc.is_object()) fail("cut list: expected an object");
  CutList list;
  list.f_total = field<std::size_t>(doc, "f_total", "cut list");
  list.cuts = field<std::vector<std::size_t>>(doc, "cuts", "cut list");
  try {
    validate_cut_list(list);
  } catch (const Error& e) {
    fail(std::string("cut list: ") + e.what());
  }
  return list;
}

void write_cut_list(std::ostream& out, const CutList& list) {
  out << json{{"f_total", list.f_total}, {"cuts", list.cuts}}.dump() << '\n';
}

std::vector<double> read_frame_signal(std::istream& in) {
  const std::string text = slurp(in);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    json doc = parse_json(text, "frame signal");
    try {
      return doc.get<std::vector<double>>();
    } catch (const json::exception& e) {
      fail(std::string("frame signal: ") + e.what());
    }
  }
  std::vector<double> values;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double v;
    std::string trailing;
    if (!(ls >> v) || (ls >> trailing) || !std::isfinite(v)) {
      fail("frame signal line " + std::to_string(lineno) + ": expected one finite number");
    }
    values.push_back(v);
  }
  return values;
}

std::map<std::string, Embedding> read_embeddings(std::istream& in) {
  json doc = parse_json(slurp(in), "embedding file");
  if (!doc.is_object()) fail("embedding file: expected an object of id -> vector");
  std::map<std::string, Embedding> out;
  for (auto& [id, vec] : doc.items()) {
    try {
      out.emplace(id, vec.get<Embedding>());
    } catch (const json::exception& e) {
      fail("embedding '" + id + "': " + e.what());
    }
  }
  return out;
}

std::string sca_report_json(const ScaReport& report, const CutList& pred, const CutList& gt) {
  json pairs = json::array();
  for (const CutPair& p : report.matching.pairs) {
    pairs.push_back({{"pred_idx", p.pred_idx},
                     {"gt_idx", p.gt_idx},
                     {"pred_frame", pred.cuts[p.pred_idx]},
                     {"gt_frame", gt.cuts[p.gt_idx]},
                     {"deviation", p.deviation}});
  }
  json doc = {{"f_total", report.f_total},
              {"penalty_per_unmatched", report.penalty},
              {"matched", pairs},
              {"unmatched_pred", report.matching.unmatched_pred},
              {"unmatched_gt", report.matching.unmatched_gt},
              {"e_matched", report.matching.e_matched},
              {"e_penalty", report.matching.e_penalty},
              {"nsd", report.nsd},
              {"sca", report.sca}};
  return doc.dump(2);
}

}  // namespace multishot::io
