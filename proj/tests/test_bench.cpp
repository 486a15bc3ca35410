// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "multishot/attention.hpp"
#include "multishot/bench.hpp"
#include "multishot/error.hpp"

using namespace multishot;

TEST_CASE("bench_scaling: single shot has no savings") {
  BenchConfig cfg;
  cfg.n_shots = {1};
  cfg.shot = {4, 8};
  cfg.repetitions = 1;
  auto rows = bench_scaling(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].flops_sparse == rows[0].flops_dense);
  CHECK(rows[0].wall_ms_sparse >= 0.0);
  CHECK(rows[0].wall_ms_dense >= 0.0);
}

TEST_CASE("bench_scaling: per-shot FLOPs are affine in shot count") {
  BenchConfig cfg;
  cfg.n_shots = {2, 4, 8};
  cfg.shot = {16, 16};  // L_shot = 256, S = 16
  cfg.d = 32;
  cfg.measure_time = false;
  auto rows = bench_scaling(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.l_shot == 256);
    CHECK(r.s == 16);
    CHECK(r.flops_sparse % r.n_shots == 0);
    CHECK(std::isnan(r.wall_ms_sparse));
  }
  auto per = [&](std::size_t i) { return rows[i].flops_sparse / rows[i].n_shots; };
  CHECK((per(1) - per(0)) / 2 == 524'288);
  CHECK((per(2) - per(1)) / 4 == 524'288);
}

TEST_CASE("bench_scaling: full-scale FLOP ratio") {
  BenchConfig cfg;
  cfg.n_shots = {12};
  cfg.shot = {13, 120};
  cfg.d = 64;
  cfg.measure_time = false;
  auto row = bench_scaling(cfg).front();
  CHECK(row.l_shot == 1560);
  CHECK(row.s == 120);
  CHECK(row.flops_dense == 89'712'230'400ULL);
  CHECK(row.flops_sparse == 13'801'881'600ULL);
  CHECK(static_cast<double>(row.flops_dense) / static_cast<double>(row.flops_sparse) == 6.5);
}

TEST_CASE("bench_scaling: config validation") {
  BenchConfig cfg;
  cfg.n_shots = {64};
  cfg.shot = {32, 32};
  try {
    bench_scaling(cfg);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigTooLarge);
  }
  cfg.measure_time = false;
  CHECK_NOTHROW(bench_scaling(cfg));

  BenchConfig zero;
  zero.repetitions = 0;
  CHECK_THROWS_AS(validate_bench_config(zero), Error);
  zero.repetitions = 1;
  zero.n_shots = {2, 0};
  CHECK_THROWS_AS(validate_bench_config(zero), Error);
}

TEST_CASE("bench_csv: schema and determinism") {
  BenchConfig cfg;
  cfg.n_shots = {3, 1};
  cfg.shot = {2, 4};
  cfg.d = 8;
  cfg.mode = PlanMode::Literal;
  cfg.precision = Precision::Double;
  cfg.repetitions = 2;
  cfg.seed = 9;
  auto a = bench_scaling(cfg);
  auto b = bench_scaling(cfg);
  REQUIRE(a.size() == 2);
  CHECK(a[0].n_shots == 3);
  CHECK(a[1].n_shots == 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].flops_sparse == b[i].flops_sparse);
    CHECK(a[i].flops_dense == b[i].flops_dense);
  }
  std::istringstream csv(bench_csv(a));
  std::string header, line;
  std::getline(csv, header);
  CHECK(header ==
        "n_shots,l_shot,tpf,s,d,mode,precision,flops_sparse,flops_dense,wall_ms_sparse,wall_ms_dense");
  std::getline(csv, line);
  // Literal, 3 shots of 8 tokens, S = 4: each KV list is 8 + 3 * 4 = 20 keys.
  const std::string prefix = "3,8,4,4,8,literal,double," + std::to_string(3 * dense_flops(8, 20, 8)) +
                             "," + std::to_string(dense_flops(24, 24, 8)) + ",";
  CHECK(line.rfind(prefix, 0) == 0);
}

TEST_CASE("verify_equivalence: double precision") {
  VerifyConfig cfg;
  cfg.seed = 1;
  cfg.cases = 100;
  auto report = verify_equivalence(cfg);
  CHECK(report.passed());
  CHECK(report.cases == 100);
  CHECK(report.max_diff_sparse <= 1e-10);
  CHECK(report.max_diff_window <= 1e-10);
}

TEST_CASE("verify_equivalence: single precision") {
  VerifyConfig cfg;
  cfg.seed = 2;
  cfg.cases = 100;
  cfg.precision = Precision::Single;
  auto report = verify_equivalence(cfg);
  CHECK(report.passed());
  CHECK(report.tolerance == 1e-5);
  CHECK(report.max_diff_sparse <= 1e-5);
}

TEST_CASE("verify_equivalence: one single-shot case") {
  VerifyConfig cfg;
  cfg.cases = 1;
  cfg.max_shots = 1;
  auto report = verify_equivalence(cfg);
  CHECK(report.passed());
  CHECK(report.max_diff_sparse <= 1e-12);
  CHECK(report.max_diff_window <= 1e-12);
}

TEST_CASE("verify_equivalence: injected fault is located") {
  VerifyConfig cfg;
  cfg.seed = 3;
  cfg.cases = 10;
  cfg.inject_fault = true;
  auto report = verify_equivalence(cfg);
  CHECK_FALSE(report.passed());
  REQUIRE_FALSE(report.failures.empty());
  for (const auto& f : report.failures) {
    CHECK(f.check == "sparse");
    CHECK(f.query_shot == 0);
    REQUIRE(f.key_shot.has_value());
    CHECK(*f.key_shot == 1);
  }
  CHECK(report.max_diff_window <= 1e-10);
  CHECK(verify_report_json(report).find("\"key_shot\": 1") != std::string::npos);
}

TEST_CASE("parse helpers") {
  CHECK(parse_precision("double") == Precision::Double);
  CHECK(parse_precision("single") == Precision::Single);
  CHECK(std::holds_alternative<FirstAndLastFrame>(parse_strategy("first-last")));
  CHECK(parse_plan_mode("literal") == PlanMode::Literal);
  CHECK_THROWS_AS(parse_precision("half"), Error);
  CHECK_THROWS_AS(parse_strategy("learned"), Error);
  CHECK_THROWS_AS(parse_plan_mode("both"), Error);
}
