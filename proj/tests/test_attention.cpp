// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "multishot/attention.hpp"
#include "multishot/error.hpp"
#include "multishot/random.hpp"
#include "oracles.hpp"

using namespace multishot;

namespace {

MatrixD from(std::size_t r, std::size_t c, std::vector<double> vals) {
  MatrixD m(r, c);
  std::copy(vals.begin(), vals.end(), m.data().begin());
  return m;
}

BoolMask random_mask(Rng& rng, std::size_t rows, std::size_t cols) {
  BoolMask m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rng.coin(0.6));
    m.set(i, rng.uniform_int(0, cols - 1));
  }
  return m;
}

}  // namespace

TEST_CASE("stable_softmax") {
  std::vector<double> a = {0.0, 0.0};
  auto pa = stable_softmax(a);
  CHECK(pa[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pa[1] == doctest::Approx(0.5).epsilon(1e-15));

  std::vector<double> big = {1000.0, 1000.0};
  auto pb = stable_softmax(big);
  CHECK(pb[0] == 0.5);
  CHECK(pb[1] == 0.5);

  std::vector<double> c = {0.0, std::log(3.0)};
  auto pc = stable_softmax(c);
  CHECK(std::abs(pc[0] - 0.25) < 1e-15);
  CHECK(std::abs(pc[1] - 0.75) < 1e-15);

  CHECK_THROWS_AS(stable_softmax(std::vector<double>{}), Error);
  try {
    stable_softmax(std::vector<double>{0.0, NAN});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteInput);
  }
}

TEST_CASE("stable_softmax sums to one") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> s(rng.uniform_int(1, 40));
    for (double& x : s) x = rng.normal() * 300.0;
    auto p = stable_softmax(s);
    double sum = std::accumulate(p.begin(), p.end(), 0.0);
    REQUIRE(std::abs(sum - 1.0) <= 1e-12);
    for (double x : p) REQUIRE(x >= 0.0);
  }
}

TEST_CASE("masked_dense_attention: worked examples") {
  BoolMask one(1, 1, true);
  auto out = masked_dense_attention(from(1, 1, {0.3}), from(1, 1, {2.0}), from(1, 1, {7.0}), one, 1.0);
  CHECK(out(0, 0) == 7.0);

  BoolMask two(1, 2, true);
  auto avg = masked_dense_attention(from(1, 1, {0.0}), from(2, 1, {0.0, 0.0}),
                                    from(2, 1, {1.0, 3.0}), two, 1.0);
  CHECK(avg(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("masked_dense_attention: all-true mask matches naive attention") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    auto q = random_normal(rng, 8, 8), k = random_normal(rng, 8, 8), v = random_normal(rng, 8, 8);
    BoolMask all(8, 8, true);
    const double scale = default_scale(8);
    auto got = masked_dense_attention(q, k, v, all, scale);
    CHECK(max_abs_diff(got, oracle::naive_attention(q, k, v, scale)) <= 1e-12);
    CHECK(max_abs_diff(dense_attention(q, k, v, scale), got) <= 1e-12);
  }
}

TEST_CASE("masked_dense_attention: errors") {
  auto q = MatrixD(2, 3), k = MatrixD(4, 3), v = MatrixD(4, 3);
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code([&] { masked_dense_attention(q, k, v, BoolMask(2, 3, true), 1.0); }) ==
        ErrorCode::ShapeMismatch);
  CHECK(code([&] { masked_dense_attention(q, MatrixD(4, 2), v, BoolMask(2, 4, true), 1.0); }) ==
        ErrorCode::ShapeMismatch);
  BoolMask holes(2, 4, true);
  for (std::size_t j = 0; j < 4; ++j) holes.set(1, j, false);
  CHECK(code([&] { masked_dense_attention(q, k, v, holes, 1.0); }) == ErrorCode::EmptyAttentionRow);
  auto bad = q;
  bad(0, 0) = INFINITY;
  CHECK(code([&] { masked_dense_attention(bad, k, v, BoolMask(2, 4, true), 1.0); }) ==
        ErrorCode::NonFiniteInput);
}

TEST_CASE("masked_dense_attention: properties") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const std::size_t lq = rng.uniform_int(1, 10), lk = rng.uniform_int(1, 12);
    const std::size_t d = rng.uniform_int(1, 8);
    auto q = random_normal(rng, lq, d), k = random_normal(rng, lk, d);
    auto v = random_normal(rng, lk, d);
    auto mask = random_mask(rng, lq, lk);
    const double scale = default_scale(d);
    auto base = masked_dense_attention(q, k, v, mask, scale);

    // Mask irrelevance: append a masked-out key with arbitrary values.
    MatrixD k2(lk + 1, d), v2(lk + 1, d);
    BoolMask m2(lq, lk + 1);
    for (std::size_t j = 0; j < lk; ++j) {
      for (std::size_t c = 0; c < d; ++c) {
        k2(j, c) = k(j, c);
        v2(j, c) = v(j, c);
      }
    }
    for (std::size_t c = 0; c < d; ++c) {
      k2(lk, c) = rng.normal() * 50;
      v2(lk, c) = rng.normal() * 50;
    }
    for (std::size_t i = 0; i < lq; ++i)
      for (std::size_t j = 0; j < lk; ++j) m2.set(i, j, mask(i, j));
    REQUIRE(max_abs_diff(masked_dense_attention(q, k2, v2, m2, scale), base) <= 1e-12);

    // Permutation equivariance over (K, V, mask columns).
    std::vector<std::size_t> perm(lk);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t j = lk; j > 1; --j) std::swap(perm[j - 1], perm[rng.uniform_int(0, j - 1)]);
    MatrixD kp(lk, d), vp(lk, d);
    BoolMask mp(lq, lk);
    for (std::size_t j = 0; j < lk; ++j) {
      for (std::size_t c = 0; c < d; ++c) {
        kp(j, c) = k(perm[j], c);
        vp(j, c) = v(perm[j], c);
      }
      for (std::size_t i = 0; i < lq; ++i) mp.set(i, j, mask(i, perm[j]));
    }
    REQUIRE(max_abs_diff(masked_dense_attention(q, kp, vp, mp, scale), base) <= 1e-12);
  }
}

TEST_CASE("masked_dense_attention: convex hull for d = 1") {
  Rng rng(29);
  for (int t = 0; t < 100; ++t) {
    const std::size_t lq = rng.uniform_int(1, 6), lk = rng.uniform_int(1, 9);
    auto q = random_normal(rng, lq, 1), k = random_normal(rng, lk, 1), v = random_normal(rng, lk, 1);
    auto mask = random_mask(rng, lq, lk);
    auto out = masked_dense_attention(q, k, v, mask, 1.0);
    for (std::size_t i = 0; i < lq; ++i) {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t j = 0; j < lk; ++j) {
        if (!mask(i, j)) continue;
        lo = std::min(lo, v(j, 0));
        hi = std::max(hi, v(j, 0));
      }
      REQUIRE(out(i, 0) >= lo - 1e-12);
      REQUIRE(out(i, 0) <= hi + 1e-12);
    }
  }
}

TEST_CASE("dense_flops") {
  CHECK(dense_flops(0, 5, 8) == 0);
  CHECK(dense_flops(2, 3, 4) == 96);
  CHECK(dense_flops(18720, 18720, 64) == 89'712'230'400ULL);
}

TEST_CASE("single-precision dense kernel tracks the double oracle") {
  Rng rng(31);
  auto q = random_normal(rng, 40, 32), k = random_normal(rng, 50, 32), v = random_normal(rng, 50, 32);
  const double scale = default_scale(32);
  auto qf = q.cast<float>(), kf = k.cast<float>(), vf = v.cast<float>();
  auto ref = masked_dense_attention(qf.cast<double>(), kf.cast<double>(), vf.cast<double>(),
                                    BoolMask(40, 50, true), scale);
  CHECK(max_abs_diff(dense_attention(qf, kf, vf, static_cast<float>(scale)), ref) <= 1e-5);
}
