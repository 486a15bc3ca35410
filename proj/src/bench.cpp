// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "multishot/attention.hpp"
#include "multishot/error.hpp"
#include "multishot/random.hpp"
#include "multishot/window_xattn.hpp"

namespace multishot {

std::string to_string(Precision p) { return p == Precision::Double ? "double" : "single"; }

Precision parse_precision(const std::string& text) {
  if (text == "double") return Precision::Double;
  if (text == "single" || text == "float") return Precision::Single;
  throw Error(ErrorCode::InvalidConfig, "unknown precision '" + text + "'");
}

SummaryStrategy parse_strategy(const std::string& text) {
  if (text == "first") return FirstFrame{};
  if (text == "first-last") return FirstAndLastFrame{};
  throw Error(ErrorCode::InvalidConfig, "unknown summary strategy '" + text + "'");
}

void validate_bench_config(const BenchConfig& config) {
  if (config.n_shots.empty() || config.d == 0 || config.repetitions == 0 ||
      config.shot.frames == 0 || config.shot.tokens_per_frame == 0) {
    throw Error(ErrorCode::InvalidConfig, "bench counts must all be at least 1");
  }
  for (std::size_t n : config.n_shots) {
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "n_shots entries must be at least 1");
    const std::size_t length = n * config.shot.tokens();
    if (config.measure_time && length > config.max_dense_tokens) {
      throw Error(ErrorCode::ConfigTooLarge,
                  "dense sequence of " + std::to_string(length) + " tokens exceeds the limit of " +
                      std::to_string(config.max_dense_tokens));
    }
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

template <typename F>
double time_ms(F&& fn) {
  const auto start = Clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename T>
std::pair<double, double> time_point(const MatrixD& q, const MatrixD& k, const MatrixD& v,
                                     const SparsePlan& plan, std::size_t reps) {
  const Matrix<T> qt = q.cast<T>(), kt = k.cast<T>(), vt = v.cast<T>();
  const T scale = static_cast<T>(default_scale(q.cols()));
  std::vector<double> sparse_ms, dense_ms;
  volatile T sink = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    sparse_ms.push_back(time_ms([&] { sink = sparse_self_attention(qt, kt, vt, plan)(0, 0); }));
    dense_ms.push_back(time_ms([&] { sink = dense_attention(qt, kt, vt, scale)(0, 0); }));
  }
  (void)sink;
  return {median(sparse_ms), median(dense_ms)};
}

}  // namespace

std::vector<BenchRow> bench_scaling(const BenchConfig& config) {
  validate_bench_config(config);
  std::vector<BenchRow> rows;
  for (std::size_t n : config.n_shots) {
    const TokenLayout layout = uniform_layout(n, config.shot);
    const SparsePlan plan = build_sparse_plan(layout, config.strategy, config.mode);
    const std::size_t length = layout.total_tokens();

    BenchRow row;
    row.n_shots = n;
    row.l_shot = config.shot.tokens();
    row.tpf = config.shot.tokens_per_frame;
    row.s = plan.summaries.front().size();
    row.d = config.d;
    row.mode = config.mode;
    row.precision = config.precision;
    row.flops_sparse = sparse_flops(plan, config.d).total;
    row.flops_dense = dense_flops(length, length, config.d);
    row.wall_ms_sparse = std::numeric_limits<double>::quiet_NaN();
    row.wall_ms_dense = std::numeric_limits<double>::quiet_NaN();

    if (config.measure_time) {
      Rng rng(config.seed + n);
      const MatrixD q = random_normal(rng, length, config.d);
      const MatrixD k = random_normal(rng, length, config.d);
      const MatrixD v = random_normal(rng, length, config.d);
      auto [sparse_ms, dense_ms] =
          config.precision == Precision::Double
              ? time_point<double>(q, k, v, plan, config.repetitions)
              : time_point<float>(q, k, v, plan, config.repetitions);
      row.wall_ms_sparse = sparse_ms;
      row.wall_ms_dense = dense_ms;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << kBenchCsvHeader << '\n';
  auto ms = [](double x) {
    std::ostringstream s;
    if (std::isnan(x)) {
      s << "nan";
    } else {
      s << std::fixed << std::setprecision(3) << x;
    }
    return s.str();
  };
  for (const BenchRow& r : rows) {
    os << r.n_shots << ',' << r.l_shot << ',' << r.tpf << ',' << r.s << ',' << r.d << ','
       << to_string(r.mode) << ',' << to_string(r.precision) << ',' << r.flops_sparse << ','
       << r.flops_dense << ',' << ms(r.wall_ms_sparse) << ',' << ms(r.wall_ms_dense) << '\n';
  }
  return os.str();
}

double verify_tolerance(Precision p) { return p == Precision::Double ? 1e-10 : 1e-5; }

namespace {

MatrixD round_to(Precision p, MatrixD m) {
  if (p == Precision::Single) return m.cast<float>().cast<double>();
  return m;
}

template <typename T>
MatrixD run_sparse(const MatrixD& q, const MatrixD& k, const MatrixD& v, const SparsePlan& plan) {
  return sparse_self_attention(q.cast<T>(), k.cast<T>(), v.cast<T>(), plan).template cast<double>();
}

template <typename T>
MatrixD run_window(const MatrixD& q, const MatrixD& k, const MatrixD& v, const TokenLayout& video,
                   const PromptLayout& prompt) {
  return window_cross_attention(q.cast<T>(), k.cast<T>(), v.cast<T>(), video, prompt)
      .template cast<double>();
}

double rows_diff(const MatrixD& a, const MatrixD& b, const TokenRange& rows) {
  double worst = 0.0;
  for (std::size_t r = rows.start; r < rows.end; ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const double d = std::abs(a(r, c) - b(r, c));
      if (d > worst || std::isnan(d)) worst = d;
    }
  }
  return worst;
}

std::optional<std::size_t> locate_key_shot(const SparsePlan& plan, const SparsePlan& reference,
                                           std::size_t shot) {
  const std::set<std::size_t> got(plan.kv[shot].begin(), plan.kv[shot].end());
  const std::set<std::size_t> want(reference.kv[shot].begin(), reference.kv[shot].end());
  std::vector<std::size_t> diff;
  std::set_symmetric_difference(got.begin(), got.end(), want.begin(), want.end(),
                                std::back_inserter(diff));
  for (std::size_t idx : diff) {
    if (idx < plan.layout.total_tokens()) return shot_of_token(plan.layout, idx);
  }
  return std::nullopt;
}

}  // namespace

VerifyReport verify_equivalence(const VerifyConfig& config) {
  if (config.cases == 0 || config.max_shots == 0 || config.max_frames == 0 ||
      config.max_tpf == 0 || config.min_d == 0 || config.max_d < config.min_d) {
    throw Error(ErrorCode::InvalidConfig, "verification bounds must be positive and ordered");
  }
  const std::size_t min_shots = config.inject_fault ? 2 : 1;
  if (config.max_shots < min_shots) {
    throw Error(ErrorCode::InvalidConfig, "fault injection needs at least two shots");
  }
  if (config.max_text < config.max_shots) {
    throw Error(ErrorCode::InvalidConfig, "max_text must allow one token per shot prompt");
  }

  VerifyReport report;
  report.cases = config.cases;
  report.tolerance = verify_tolerance(config.precision);
  const Precision prec = config.precision;

  for (std::size_t c = 0; c < config.cases; ++c) {
    Rng rng(config.seed + c);
    const std::size_t n = rng.uniform_int(min_shots, config.max_shots);
    std::vector<ShotSpec> specs(n);
    for (ShotSpec& s : specs) {
      s.frames = rng.uniform_int(1, config.max_frames);
      s.tokens_per_frame = rng.uniform_int(1, config.max_tpf);
    }
    const std::size_t d = rng.uniform_int(config.min_d, config.max_d);
    const TokenLayout layout = build_token_layout(specs);
    const std::size_t length = layout.total_tokens();
    const SummaryStrategy strategy =
        c % 2 == 0 ? SummaryStrategy{FirstFrame{}} : SummaryStrategy{FirstAndLastFrame{}};

    // Sparse inter-shot self-attention.
    const SparsePlan reference = build_sparse_plan(layout, strategy, PlanMode::Dedupe);
    SparsePlan plan = reference;
    if (config.inject_fault) {
      const std::size_t dropped = plan.summaries[1].front();
      std::erase(plan.kv[0], dropped);
      plan.recompute_offsets();
    }
    const MatrixD q = round_to(prec, random_normal(rng, length, d));
    const MatrixD k = round_to(prec, random_normal(rng, length, d));
    const MatrixD v = round_to(prec, random_normal(rng, length, d));
    const MatrixD oracle =
        masked_dense_attention(q, k, v, plan_to_dense_mask(reference), default_scale(d));
    const MatrixD sparse = prec == Precision::Double ? run_sparse<double>(q, k, v, plan)
                                                     : run_sparse<float>(q, k, v, plan);
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = rows_diff(sparse, oracle, layout.range(i));
      report.max_diff_sparse = std::max(report.max_diff_sparse, diff);
      if (!(diff <= report.tolerance)) {
        report.failures.push_back({"sparse", c, i, locate_key_shot(plan, reference, i), diff});
      }
    }

    // Window cross-attention.
    const std::size_t delim = rng.coin() ? 1 : 0;
    const std::size_t global = rng.uniform_int(0, std::min<std::size_t>(4, config.max_text - n));
    const std::size_t budget = config.max_text - global - delim * (n - 1);
    const std::size_t per_shot_max = std::max<std::size_t>(1, budget / n);
    std::vector<std::size_t> shot_tokens(n);
    for (auto& t : shot_tokens) t = rng.uniform_int(1, per_shot_max);
    const PromptLayout prompt = make_prompt_layout(global, shot_tokens, delim);
    const std::size_t text = prompt.text_length();
    const MatrixD qv = round_to(prec, random_normal(rng, length, d));
    const MatrixD kt = round_to(prec, random_normal(rng, text, d));
    const MatrixD vt = round_to(prec, random_normal(rng, text, d));
    const MatrixD window_oracle =
        masked_dense_attention(qv, kt, vt, build_cross_mask(layout, prompt), default_scale(d));
    const MatrixD window = prec == Precision::Double
                               ? run_window<double>(qv, kt, vt, layout, prompt)
                               : run_window<float>(qv, kt, vt, layout, prompt);
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = rows_diff(window, window_oracle, layout.range(i));
      report.max_diff_window = std::max(report.max_diff_window, diff);
      if (!(diff <= report.tolerance)) {
        report.failures.push_back({"window", c, i, std::nullopt, diff});
      }
    }
  }
  return report;
}

std::string verify_report_json(const VerifyReport& report) {
  nlohmann::json failures = nlohmann::json::array();
  for (const VerifyFailure& f : report.failures) {
    nlohmann::json rec = {{"check", f.check},
                          {"case", f.case_index},
                          {"query_shot", f.query_shot},
                          {"max_abs_diff", f.max_abs_diff}};
    rec["key_shot"] = f.key_shot ? nlohmann::json(*f.key_shot) : nlohmann::json(nullptr);
    failures.push_back(rec);
  }
  nlohmann::json doc = {{"cases", report.cases},
                        {"tolerance", report.tolerance},
                        {"max_diff_sparse", report.max_diff_sparse},
                        {"max_diff_window", report.max_diff_window},
                        {"passed", report.passed()},
                        {"failures", failures}};
  return doc.dump(2);
}

}  // namespace multishot
