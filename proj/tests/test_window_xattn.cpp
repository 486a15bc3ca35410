// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include "doctest.h"
#include "multishot/attention.hpp"
#include "multishot/error.hpp"
#include "multishot/random.hpp"
#include "multishot/window_xattn.hpp"

using namespace multishot;

namespace {

std::vector<std::size_t> visible(const BoolMask& m, std::size_t row) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < m.cols(); ++k)
    if (m(row, k)) out.push_back(k);
  return out;
}

struct Instance {
  TokenLayout video;
  PromptLayout prompt;
};

Instance random_instance(Rng& rng, std::size_t max_shots = 5) {
  std::vector<ShotSpec> specs(rng.uniform_int(1, max_shots));
  for (auto& s : specs) s = {rng.uniform_int(1, 3), rng.uniform_int(1, 5)};
  std::vector<std::size_t> shot_tokens(specs.size());
  for (auto& t : shot_tokens) t = rng.uniform_int(1, 4);
  return {build_token_layout(specs),
          make_prompt_layout(rng.uniform_int(0, 4), shot_tokens, rng.uniform_int(0, 2))};
}

}  // namespace

TEST_CASE("build_cross_mask: two shots") {
  auto video = uniform_layout(2, {1, 4});
  auto prompt = make_prompt_layout(3, {2, 2});
  auto mask = build_cross_mask(video, prompt);
  CHECK(mask.rows() == 8);
  CHECK(mask.cols() == 7);
  for (std::size_t t = 0; t < 4; ++t) CHECK(visible(mask, t) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  for (std::size_t t = 4; t < 8; ++t) CHECK(visible(mask, t) == std::vector<std::size_t>{0, 1, 2, 5, 6});
}

TEST_CASE("build_cross_mask: single shot is unrestricted") {
  auto video = uniform_layout(1, {2, 3});
  auto mask = build_cross_mask(video, make_prompt_layout(4, {3}));
  CHECK(mask == BoolMask(6, 7, true));
}

TEST_CASE("build_cross_mask: delimiters are never visible") {
  auto video = uniform_layout(3, {1, 2});
  auto prompt = make_prompt_layout(2, {1, 2, 1}, 2);
  REQUIRE(prompt.delimiters.size() == 2);
  auto mask = build_cross_mask(video, prompt);
  for (std::size_t t = 0; t < mask.rows(); ++t) {
    for (const auto& r : prompt.delimiters)
      for (std::size_t k = r.start; k < r.end; ++k) CHECK_FALSE(mask(t, k));
  }
}

TEST_CASE("build_cross_mask: membership scan over random layouts") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    auto [video, prompt] = random_instance(rng);
    auto mask = build_cross_mask(video, prompt);
    for (std::size_t t = 0; t < video.total_tokens(); ++t) {
      std::size_t shot = 0;
      while (!video.range(shot).contains(t)) ++shot;
      for (std::size_t k = 0; k < prompt.text_length(); ++k) {
        const bool expected = prompt.global.contains(k) || prompt.shots[shot].contains(k);
        REQUIRE(mask(t, k) == expected);
      }
    }
  }
}

TEST_CASE("build_cross_mask: layout errors") {
  auto video = uniform_layout(2, {1, 2});
  try {
    build_cross_mask(video, make_prompt_layout(1, {1, 1, 1}));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LayoutMismatch);
  }
  PromptLayout overlapping{{0, 3}, {{2, 4}, {4, 5}}, {}};
  CHECK_THROWS_AS(build_cross_mask(video, overlapping), Error);
  PromptLayout gap{{0, 2}, {{3, 4}, {4, 5}}, {}};
  CHECK_THROWS_AS(validate_prompt_layout(gap), Error);
}

TEST_CASE("window_cross_attention: single shot equals plain cross-attention") {
  Rng rng(43);
  auto video = uniform_layout(1, {3, 4});
  auto prompt = make_prompt_layout(5, {6});
  auto q = random_normal(rng, 12, 8), k = random_normal(rng, 11, 8), v = random_normal(rng, 11, 8);
  auto got = window_cross_attention(q, k, v, video, prompt);
  CHECK(max_abs_diff(got, dense_attention(q, k, v, default_scale(8))) <= 1e-12);
}

TEST_CASE("window_cross_attention: equals masked-dense oracle") {
  Rng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ShotSpec> specs(3);
    for (auto& s : specs) s = {rng.uniform_int(1, 4), rng.uniform_int(1, 6)};
    auto video = build_token_layout(specs);
    auto prompt = make_prompt_layout(rng.uniform_int(0, 8),
                                     {rng.uniform_int(1, 7), rng.uniform_int(1, 7),
                                      rng.uniform_int(1, 7)},
                                     rng.uniform_int(0, 1));
    REQUIRE(prompt.text_length() <= 32);
    const std::size_t d = rng.uniform_int(1, 16);
    auto q = random_normal(rng, video.total_tokens(), d);
    auto k = random_normal(rng, prompt.text_length(), d);
    auto v = random_normal(rng, prompt.text_length(), d);
    auto oracle = masked_dense_attention(q, k, v, build_cross_mask(video, prompt), default_scale(d));
    REQUIRE(max_abs_diff(window_cross_attention(q, k, v, video, prompt), oracle) <= 1e-10);
    auto single = window_cross_attention(q.cast<float>(), k.cast<float>(), v.cast<float>(), video,
                                         prompt);
    auto oracle_f = masked_dense_attention(q.cast<float>().cast<double>(),
                                           k.cast<float>().cast<double>(),
                                           v.cast<float>().cast<double>(),
                                           build_cross_mask(video, prompt), default_scale(d));
    REQUIRE(max_abs_diff(single, oracle_f) <= 1e-5);
  }
}

TEST_CASE("window_cross_attention: locality and delimiter exclusion") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    auto video = uniform_layout(3, {2, 3});
    auto prompt = make_prompt_layout(2, {3, 2, 4}, 1);
    const std::size_t d = 6;
    auto q = random_normal(rng, video.total_tokens(), d);
    auto k = random_normal(rng, prompt.text_length(), d);
    auto v = random_normal(rng, prompt.text_length(), d);
    auto base = window_cross_attention(q, k, v, video, prompt);

    auto k2 = k, v2 = v;
    for (std::size_t t = prompt.shots[1].start; t < prompt.shots[1].end; ++t) {
      for (std::size_t c = 0; c < d; ++c) {
        k2(t, c) += 10.0 * rng.normal();
        v2(t, c) += 10.0 * rng.normal();
      }
    }
    for (const auto& r : prompt.delimiters) {
      for (std::size_t t = r.start; t < r.end; ++t) {
        for (std::size_t c = 0; c < d; ++c) {
          k2(t, c) = 1e3 * rng.normal();
          v2(t, c) = 1e3 * rng.normal();
        }
      }
    }
    auto perturbed = window_cross_attention(q, k2, v2, video, prompt);
    for (std::size_t shot : {0u, 2u}) {
      for (std::size_t t = video.range(shot).start; t < video.range(shot).end; ++t) {
        for (std::size_t c = 0; c < d; ++c) REQUIRE(perturbed(t, c) == base(t, c));
      }
    }
    bool shot1_changed = false;
    for (std::size_t t = video.range(1).start; t < video.range(1).end; ++t)
      for (std::size_t c = 0; c < d; ++c) shot1_changed |= perturbed(t, c) != base(t, c);
    CHECK(shot1_changed);
  }
}

TEST_CASE("window_cross_attention: shape errors") {
  auto video = uniform_layout(2, {1, 2});
  auto prompt = make_prompt_layout(1, {1, 1});
  try {
    window_cross_attention(MatrixD(3, 4), MatrixD(3, 4), MatrixD(3, 4), video, prompt);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ShapeMismatch);
  }
  auto empty_prompt = make_prompt_layout(0, {0, 1});
  try {
    window_cross_attention(MatrixD(4, 2), MatrixD(1, 2), MatrixD(1, 2), video, empty_prompt);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyAttentionRow);
  }
}
