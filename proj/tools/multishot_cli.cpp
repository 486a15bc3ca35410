// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

// multishot: attention demos, oracle verification, FLOP/scaling benchmarks,
// dataset assembly, and metric scoring.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "multishot/attention.hpp"
#include "multishot/bench.hpp"
#include "multishot/curation.hpp"
#include "multishot/embedding.hpp"
#include "multishot/error.hpp"
#include "multishot/io.hpp"
#include "multishot/layout.hpp"
#include "multishot/metrics.hpp"
#include "multishot/sparse_attn.hpp"
#include "multishot/window_xattn.hpp"

using namespace multishot;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to `path`, or stdout for "-".
void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// "2x3,1x3" -> {{2,3},{1,3}} (frames x tokens per frame).
std::vector<ShotSpec> parse_shots(const std::string& text) {
  std::vector<ShotSpec> specs;
  for (const std::string& item : split(text, ',')) {
    auto parts = split(item, 'x');
    if (parts.size() != 2) {
      throw Error(ErrorCode::InvalidConfig, "shot spec '" + item + "' is not FRAMESxTPF");
    }
    specs.push_back({std::stoul(parts[0]), std::stoul(parts[1])});
  }
  return specs;
}

std::string mask_grid(const BoolMask& mask) {
  std::string out;
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    for (std::size_t c = 0; c < mask.cols(); ++c) out += mask(r, c) ? '#' : '.';
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

struct DemoArgs {
  std::string shots = "2x3,1x3,2x3";
  std::string strategy = "first";
  std::string mode = "dedupe";
  std::size_t global_tokens = 3;
  std::string shot_tokens;
  std::size_t delimiter_tokens = 1;
  std::size_t d = 64;
};

int run_demo(const DemoArgs& a) {
  const TokenLayout layout = build_token_layout(parse_shots(a.shots));
  std::vector<std::size_t> shot_tokens(layout.num_shots(), 2);
  if (!a.shot_tokens.empty()) {
    shot_tokens.clear();
    for (const auto& t : split(a.shot_tokens, ',')) shot_tokens.push_back(std::stoul(t));
  }
  const PromptLayout prompt = make_prompt_layout(a.global_tokens, shot_tokens, a.delimiter_tokens);
  const SparsePlan plan = build_sparse_plan(layout, parse_strategy(a.strategy), parse_plan_mode(a.mode));

  std::cout << "layout: " << layout.num_shots() << " shots, L = " << layout.total_tokens() << '\n';
  for (std::size_t i = 0; i < layout.num_shots(); ++i) {
    const auto& r = layout.range(i);
    std::cout << "  shot " << i << ": " << layout.shot(i).frames << " frames x "
              << layout.shot(i).tokens_per_frame << " tokens, [" << r.start << ", " << r.end
              << ")\n";
  }
  std::cout << "\nwindow cross-attention mask (video rows x text columns):\n"
            << mask_grid(build_cross_mask(layout, prompt));
  std::cout << "\nsparse plan (" << to_string(plan.mode) << ", " << strategy_name(plan.strategy)
            << "):\n"
            << plan_manifest(plan);
  if (plan.mode == PlanMode::Dedupe) {
    std::cout << "\nsparse self-attention mask:\n" << mask_grid(plan_to_dense_mask(plan));
  }
  const FlopReport flops = sparse_flops(plan, a.d);
  const std::uint64_t dense = dense_flops(layout.total_tokens(), layout.total_tokens(), a.d);
  std::cout << "\nFLOPs at d = " << a.d << ": sparse " << flops.total << ", dense " << dense;
  if (flops.closed_form) std::cout << ", closed form " << *flops.closed_form;
  std::cout << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int run_verify(const VerifyConfig& cfg, bool as_json) {
  const VerifyReport report = verify_equivalence(cfg);
  if (as_json) {
    std::cout << verify_report_json(report) << '\n';
  } else {
    std::cout << (report.passed() ? "PASS" : "FAIL") << ": " << report.cases
              << " cases, tolerance " << report.tolerance << ", max |sparse - oracle| "
              << report.max_diff_sparse << ", max |window - oracle| " << report.max_diff_window
              << '\n';
    for (const VerifyFailure& f : report.failures) {
      std::cout << "  " << f.check << " case " << f.case_index << ": query shot "
                << f.query_shot;
      if (f.key_shot) std::cout << " vs key shot " << *f.key_shot;
      std::cout << ", max diff " << f.max_abs_diff << '\n';
    }
  }
  return report.passed() ? kExitOk : kExitVerifyFailed;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string config_path;
  std::vector<std::size_t> n_shots;
  std::size_t frames = 0;
  std::size_t tpf = 0;
  std::string strategy;
  std::string mode;
  std::size_t d = 0;
  std::string precision;
  std::size_t repetitions = 0;
  std::uint64_t seed = 0;
  std::size_t max_dense_tokens = 0;
  bool no_timing = false;
  std::string output = "-";
};

BenchConfig load_bench_config(const std::string& path) {
  BenchConfig cfg;
  json doc;
  try {
    doc = json::parse(read_file(path));
    if (doc.contains("n_shots")) cfg.n_shots = doc["n_shots"].get<std::vector<std::size_t>>();
    if (doc.contains("frames")) cfg.shot.frames = doc["frames"].get<std::size_t>();
    if (doc.contains("tpf")) cfg.shot.tokens_per_frame = doc["tpf"].get<std::size_t>();
    if (doc.contains("strategy")) cfg.strategy = parse_strategy(doc["strategy"].get<std::string>());
    if (doc.contains("mode")) cfg.mode = parse_plan_mode(doc["mode"].get<std::string>());
    if (doc.contains("d")) cfg.d = doc["d"].get<std::size_t>();
    if (doc.contains("precision")) cfg.precision = parse_precision(doc["precision"].get<std::string>());
    if (doc.contains("repetitions")) cfg.repetitions = doc["repetitions"].get<std::size_t>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("max_dense_tokens")) {
      cfg.max_dense_tokens = doc["max_dense_tokens"].get<std::size_t>();
    }
    if (doc.contains("no_timing")) cfg.measure_time = !doc["no_timing"].get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, "config '" + path + "': " + e.what());
  }
  return cfg;
}

int run_bench(const BenchArgs& a, const CLI::App& cmd) {
  BenchConfig cfg = a.config_path.empty() ? BenchConfig{} : load_bench_config(a.config_path);
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--n-shots")) cfg.n_shots = a.n_shots;
  if (given("--frames")) cfg.shot.frames = a.frames;
  if (given("--tpf")) cfg.shot.tokens_per_frame = a.tpf;
  if (given("--strategy")) cfg.strategy = parse_strategy(a.strategy);
  if (given("--mode")) cfg.mode = parse_plan_mode(a.mode);
  if (given("--d")) cfg.d = a.d;
  if (given("--precision")) cfg.precision = parse_precision(a.precision);
  if (given("--reps")) cfg.repetitions = a.repetitions;
  if (given("--seed")) cfg.seed = a.seed;
  if (given("--max-dense-tokens")) cfg.max_dense_tokens = a.max_dense_tokens;
  if (a.no_timing) cfg.measure_time = false;
  write_output(a.output, bench_csv(bench_scaling(cfg)));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AssembleArgs {
  std::string manifest = "-";
  std::vector<double> tiers = {kDefaultTiersSeconds.begin(), kDefaultTiersSeconds.end()};
  double tolerance_fraction = kDefaultToleranceFraction;
  std::size_t max_shots = kMaxShotsPerSample;
  FilterPolicy policy;
  std::string global_prompt;
  std::string output = "-";
  std::string rejected_path;
};

int run_assemble(const AssembleArgs& a) {
  std::istringstream in(read_file(a.manifest));
  const std::vector<SourceShot> shots = io::read_shot_manifest(in);
  const FilterResult filtered = filter_shots(shots, a.policy);

  std::vector<CurationSample> all;
  std::size_t with_prompt = 0;
  for (double tier : a.tiers) {
    auto samples = assemble_samples(filtered.kept, tier, a.tolerance_fraction * tier, a.max_shots);
    for (auto& s : samples) {
      if (attach_prompt(s, a.global_prompt)) ++with_prompt;
      all.push_back(std::move(s));
    }
  }
  std::ostringstream out;
  io::write_samples(out, all);
  write_output(a.output, out.str());

  if (!a.rejected_path.empty()) {
    std::ostringstream rej;
    for (const RejectedShot& r : filtered.rejected) {
      rej << json{{"id", r.shot.id}, {"reason", std::string(to_string(r.reason))}}.dump() << '\n';
    }
    write_output(a.rejected_path, rej.str());
  }
  std::cerr << shots.size() << " shots, " << filtered.kept.size() << " kept, "
            << filtered.rejected.size() << " rejected; " << all.size() << " samples ("
            << with_prompt << " with prompts)\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int run_prompt_render(const std::string& json_path, const std::string& global,
                      const std::vector<std::string>& shots) {
  HierarchicalPrompt prompt{global, shots};
  if (!json_path.empty()) {
    try {
      json doc = json::parse(read_file(json_path));
      prompt.global = doc.at("global").get<std::string>();
      prompt.per_shot = doc.at("per_shot").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "prompt file: " + std::string(e.what()));
    }
  }
  std::cout << render_hierarchical_prompt(prompt) << '\n';
  return kExitOk;
}

int run_prompt_parse(const std::string& path) {
  std::string text = read_file(path);
  // A single trailing newline is file framing, not prompt content.
  if (!text.empty() && text.back() == '\n' && text.find('\n') != text.size() - 1) text.pop_back();
  const HierarchicalPrompt prompt = parse_hierarchical_prompt(text);
  std::cout << json{{"global", prompt.global}, {"per_shot", prompt.per_shot}}.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int run_detect_cuts(const std::string& path, double threshold) {
  std::istringstream in(read_file(path));
  io::write_cut_list(std::cout, detect_cuts(io::read_frame_signal(in), threshold));
  return kExitOk;
}

int run_score_sca(const std::string& pred_path, const std::string& gt_path, double penalty) {
  std::istringstream pin(read_file(pred_path)), gin(read_file(gt_path));
  const CutList pred = io::read_cut_list(pin);
  const CutList gt = io::read_cut_list(gin);
  std::optional<double> pen;
  if (penalty > 0.0) pen = penalty;
  std::cout << io::sca_report_json(shot_cut_accuracy(pred, gt, pen), pred, gt) << '\n';
  return kExitOk;
}

struct ConsistencyArgs {
  std::string embeddings;
  std::string kind;
  std::vector<std::string> groups;
  std::string frames;
  std::vector<std::string> pairs;
};

int run_score_consistency(const ConsistencyArgs& a) {
  std::istringstream in(read_file(a.embeddings));
  const TableEmbeddingProvider provider(io::read_embeddings(in));
  for (const std::string& id : provider.normalized_ids()) {
    std::cerr << "warning: embedding '" << id << "' was not unit-norm; normalized on load\n";
  }

  double score = 0.0;
  if (a.kind == "inter") {
    std::vector<std::string> ids;
    std::vector<std::vector<std::size_t>> groups;
    for (const std::string& g : a.groups) {
      groups.emplace_back();
      for (const std::string& id : split(g, ',')) {
        groups.back().push_back(ids.size());
        ids.push_back(id);
      }
    }
    // Each group member gets its own slot; repeated ids across groups are fine.
    score = inter_shot_consistency(embed_all(provider, ids), groups);
  } else if (a.kind == "intra") {
    score = intra_shot_consistency(embed_all(provider, split(a.frames, ',')));
  } else if (a.kind == "semantic") {
    std::vector<std::string> prompts, media;
    for (const std::string& p : a.pairs) {
      auto parts = split(p, ':');
      if (parts.size() != 2) {
        throw Error(ErrorCode::InvalidConfig, "pair '" + p + "' is not PROMPT_ID:MEDIA_ID");
      }
      prompts.push_back(parts[0]);
      media.push_back(parts[1]);
    }
    score = semantic_consistency_per_shot(embed_all(provider, prompts), embed_all(provider, media));
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown consistency kind '" + a.kind + "'");
  }
  std::cout << json{{"kind", a.kind}, {"score", score}}.dump() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-shot attention, curation, and evaluation toolkit"};
  app.require_subcommand(1);

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo-attn", "Print masks, plan, and FLOPs for a small layout");
  demo_cmd->add_option("--shots", demo.shots, "Shots as FRAMESxTPF list, e.g. 2x3,1x3")
      ->capture_default_str();
  demo_cmd->add_option("--strategy", demo.strategy, "first | first-last")->capture_default_str();
  demo_cmd->add_option("--mode", demo.mode, "dedupe | literal")->capture_default_str();
  demo_cmd->add_option("--global-tokens", demo.global_tokens)->capture_default_str();
  demo_cmd->add_option("--shot-tokens", demo.shot_tokens, "Per-shot prompt token counts (default 2 each)");
  demo_cmd->add_option("--delimiter-tokens", demo.delimiter_tokens)->capture_default_str();
  demo_cmd->add_option("--d", demo.d, "Head width for FLOP counts")->capture_default_str();

  VerifyConfig verify;
  bool verify_json = false;
  std::string verify_precision = "double";
  auto* verify_cmd = app.add_subcommand("verify", "Randomized oracle equivalence suite");
  verify_cmd->add_option("--seed", verify.seed)->capture_default_str();
  verify_cmd->add_option("--cases", verify.cases)->capture_default_str()->check(CLI::PositiveNumber);
  verify_cmd->add_option("--precision", verify_precision, "double | single")->capture_default_str();
  verify_cmd->add_option("--max-shots", verify.max_shots)->capture_default_str();
  verify_cmd->add_option("--max-frames", verify.max_frames)->capture_default_str();
  verify_cmd->add_option("--max-tpf", verify.max_tpf)->capture_default_str();
  verify_cmd->add_option("--min-d", verify.min_d)->capture_default_str();
  verify_cmd->add_option("--max-d", verify.max_d)->capture_default_str();
  verify_cmd->add_option("--max-text", verify.max_text)->capture_default_str();
  verify_cmd->add_flag("--inject-fault", verify.inject_fault,
                       "Drop one summary key from shot 0's plan to exercise failure reporting");
  verify_cmd->add_flag("--json", verify_json, "Emit the report as JSON");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "FLOP and wall-time scaling table (CSV)");
  bench_cmd->add_option("--config", bench.config_path, "JSON config; flags override it");
  bench_cmd->add_option("--n-shots", bench.n_shots, "Shot counts to sweep")->delimiter(',');
  bench_cmd->add_option("--frames", bench.frames, "Latent frames per shot");
  bench_cmd->add_option("--tpf", bench.tpf, "Tokens per frame");
  bench_cmd->add_option("--strategy", bench.strategy, "first | first-last");
  bench_cmd->add_option("--mode", bench.mode, "dedupe | literal");
  bench_cmd->add_option("--d", bench.d, "Head width");
  bench_cmd->add_option("--precision", bench.precision, "single | double");
  bench_cmd->add_option("--reps", bench.repetitions, "Timed repetitions per point");
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--max-dense-tokens", bench.max_dense_tokens);
  bench_cmd->add_flag("--no-timing", bench.no_timing, "FLOP columns only");
  bench_cmd->add_option("-o,--output", bench.output, "CSV path, - for stdout")->capture_default_str();

  AssembleArgs assemble;
  auto* assemble_cmd = app.add_subcommand("assemble", "Filter a shot manifest and assemble samples");
  assemble_cmd->add_option("--manifest", assemble.manifest, "JSONL shot manifest, - for stdin")
      ->capture_default_str();
  assemble_cmd->add_option("--tier", assemble.tiers, "Target durations in seconds")
      ->delimiter(',')
      ->capture_default_str();
  assemble_cmd->add_option("--tolerance-fraction", assemble.tolerance_fraction)->capture_default_str();
  assemble_cmd->add_option("--max-shots", assemble.max_shots)->capture_default_str();
  assemble_cmd->add_option("--min-duration", assemble.policy.min_duration_s)->capture_default_str();
  assemble_cmd->add_option("--min-luminance", assemble.policy.min_luminance)->capture_default_str();
  assemble_cmd->add_option("--min-aesthetic", assemble.policy.min_aesthetic)->capture_default_str();
  assemble_cmd->add_option("--global-prompt", assemble.global_prompt,
                           "Global text for samples whose shots all carry captions");
  assemble_cmd->add_option("-o,--output", assemble.output)->capture_default_str();
  assemble_cmd->add_option("--rejected", assemble.rejected_path, "Write rejected shots as JSONL");

  auto* prompt_cmd = app.add_subcommand("prompt", "Render or parse hierarchical prompts");
  prompt_cmd->require_subcommand(1);
  std::string render_global, render_json;
  std::vector<std::string> render_shots;
  auto* render_cmd = prompt_cmd->add_subcommand("render", "Fields -> prompt text");
  render_cmd->add_option("--global", render_global);
  render_cmd->add_option("--shot", render_shots, "Per-shot text (repeat)");
  render_cmd->add_option("--json", render_json, "JSON file with global and per_shot");
  std::string parse_input = "-";
  auto* parse_cmd = prompt_cmd->add_subcommand("parse", "Prompt text -> JSON fields");
  parse_cmd->add_option("--input", parse_input, "Text file, - for stdin")->capture_default_str();

  std::string signal_path;
  double cut_threshold = 0.3;
  auto* detect_cmd = app.add_subcommand("detect-cuts", "Threshold a per-frame signal into cuts");
  detect_cmd->add_option("--signal", signal_path, "One number per line or a JSON array")->required();
  detect_cmd->add_option("--threshold", cut_threshold)->capture_default_str();

  std::string pred_path, gt_path;
  double penalty = 0.0;
  auto* sca_cmd = app.add_subcommand("score-sca", "Shot Cut Accuracy between two cut lists");
  sca_cmd->add_option("--pred", pred_path)->required();
  sca_cmd->add_option("--gt", gt_path)->required();
  sca_cmd->add_option("--penalty", penalty,
                      "Penalty per unmatched cut (default: mean ground-truth shot length)");

  ConsistencyArgs consistency;
  auto* cons_cmd = app.add_subcommand("score-consistency", "Embedding consistency scores");
  cons_cmd->add_option("--embeddings", consistency.embeddings, "JSON id -> vector")->required();
  cons_cmd->add_option("--kind", consistency.kind, "inter | intra | semantic")->required();
  cons_cmd->add_option("--group", consistency.groups, "Comma-separated ids sharing a character (repeat)");
  cons_cmd->add_option("--frames", consistency.frames, "Comma-separated frame ids of one shot");
  cons_cmd->add_option("--pair", consistency.pairs, "PROMPT_ID:MEDIA_ID (repeat)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*demo_cmd) return run_demo(demo);
    if (*verify_cmd) {
      verify.precision = parse_precision(verify_precision);
      return run_verify(verify, verify_json);
    }
    if (*bench_cmd) return run_bench(bench, *bench_cmd);
    if (*assemble_cmd) return run_assemble(assemble);
    if (*render_cmd) return run_prompt_render(render_json, render_global, render_shots);
    if (*parse_cmd) return run_prompt_parse(parse_input);
    if (*detect_cmd) return run_detect_cuts(signal_path, cut_threshold);
    if (*sca_cmd) return run_score_sca(pred_path, gt_path, penalty);
    if (*cons_cmd) return run_score_consistency(consistency);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
