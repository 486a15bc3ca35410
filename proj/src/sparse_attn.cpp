// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/sparse_attn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "multishot/attention.hpp"
#include "multishot/error.hpp"
#include "multishot/kernel.hpp"

namespace multishot {

std::string to_string(PlanMode mode) { return mode == PlanMode::Dedupe ? "dedupe" : "literal"; }

PlanMode parse_plan_mode(const std::string& text) {
  if (text == "dedupe") return PlanMode::Dedupe;
  if (text == "literal") return PlanMode::Literal;
  throw Error(ErrorCode::InvalidConfig, "unknown plan mode '" + text + "'");
}

void SparsePlan::recompute_offsets() {
  offsets.assign(1, 0);
  for (const auto& list : kv) offsets.push_back(offsets.back() + list.size());
}

SparsePlan build_sparse_plan(const TokenLayout& layout, const SummaryStrategy& strategy,
                             PlanMode mode) {
  SparsePlan plan{layout, strategy, mode, summary_token_indices(layout, strategy), {}, {}};
  const std::size_t n = layout.num_shots();
  plan.kv.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TokenRange& own = layout.range(i);
    std::vector<std::size_t>& list = plan.kv[i];
    if (n == 1) {
      for (std::size_t t = own.start; t < own.end; ++t) list.push_back(t);
      continue;
    }
    if (mode == PlanMode::Dedupe) {
      // Summaries lie inside their own shot, so ascending shot order with the
      // own range spliced in at position i is already sorted and unique.
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) {
          for (std::size_t t = own.start; t < own.end; ++t) list.push_back(t);
        } else {
          list.insert(list.end(), plan.summaries[j].begin(), plan.summaries[j].end());
        }
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        list.insert(list.end(), plan.summaries[j].begin(), plan.summaries[j].end());
      }
      for (std::size_t t = own.start; t < own.end; ++t) list.push_back(t);
    }
  }
  plan.recompute_offsets();
  return plan;
}

template <typename T>
PackedKV<T> pack_varlen(const SparsePlan& plan, const Matrix<T>& k, const Matrix<T>& v) {
  const std::size_t length = plan.layout.total_tokens();
  if (k.rows() != length || v.rows() != length || k.cols() != v.cols()) {
    throw Error(ErrorCode::PlanLayoutMismatch,
                "K/V have " + std::to_string(k.rows()) + "/" + std::to_string(v.rows()) +
                    " rows, plan layout has " + std::to_string(length) + " tokens");
  }
  PackedKV<T> packed;
  std::size_t total = 0;
  for (const auto& list : plan.kv) total += list.size();
  packed.keys = Matrix<T>(total, k.cols());
  packed.values = Matrix<T>(total, v.cols());
  packed.offsets.assign(1, 0);
  std::size_t row = 0;
  for (std::size_t i = 0; i < plan.kv.size(); ++i) {
    for (std::size_t idx : plan.kv[i]) {
      if (idx >= length) {
        throw Error(ErrorCode::PlanLayoutMismatch,
                    "shot " + std::to_string(i) + " references token " + std::to_string(idx) +
                        " outside the layout");
      }
      std::copy_n(k.row(idx).data(), k.cols(), packed.keys.row(row).data());
      std::copy_n(v.row(idx).data(), v.cols(), packed.values.row(row).data());
      ++row;
    }
    packed.offsets.push_back(row);
  }
  return packed;
}

template <typename T>
Matrix<T> sparse_self_attention(const Matrix<T>& q, const Matrix<T>& k, const Matrix<T>& v,
                                const SparsePlan& plan) {
  const std::size_t d = q.cols();
  if (q.rows() != plan.layout.total_tokens() || k.cols() != d || v.cols() != d) {
    throw Error(ErrorCode::ShapeMismatch, "Q/K/V do not share the plan's token count and width");
  }
  if (plan.kv.size() != plan.layout.num_shots()) {
    throw Error(ErrorCode::PlanLayoutMismatch, "plan has a KV list count unlike its layout");
  }
  if (!q.all_finite() || !k.all_finite() || !v.all_finite()) {
    throw Error(ErrorCode::NonFiniteInput, "attention inputs must be finite");
  }
  PackedKV<T> packed = pack_varlen(plan, k, v);
  const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d)));
  Matrix<T> out(q.rows(), d);
  std::vector<T> scratch;
  for (std::size_t i = 0; i < plan.kv.size(); ++i) {
    const std::size_t begin = packed.offsets[i];
    const std::size_t n_kv = packed.offsets[i + 1] - begin;
    const TokenRange& rows = plan.layout.range(i);
    if (n_kv == 0 && rows.size() > 0) {
      throw Error(ErrorCode::EmptyAttentionRow, "shot " + std::to_string(i) + " has no keys");
    }
    auto keys = packed.keys.data().subspan(begin * d, n_kv * d);
    auto values = packed.values.data().subspan(begin * d, n_kv * d);
    kernel::attend_block<T>(q, rows.start, rows.end, keys, values, n_kv, scale, out, scratch);
  }
  return out;
}

BoolMask plan_to_dense_mask(const SparsePlan& plan) {
  if (plan.mode != PlanMode::Dedupe) {
    throw Error(ErrorCode::UnrepresentableAsMask,
                "a Literal plan duplicates keys, which a boolean mask cannot express");
  }
  const std::size_t length = plan.layout.total_tokens();
  BoolMask mask(length, length);
  for (std::size_t i = 0; i < plan.kv.size(); ++i) {
    const TokenRange& rows = plan.layout.range(i);
    for (std::size_t idx : plan.kv[i]) {
      if (idx >= length) {
        throw Error(ErrorCode::PlanLayoutMismatch, "plan index outside the layout");
      }
      for (std::size_t t = rows.start; t < rows.end; ++t) mask.set(t, idx);
    }
  }
  return mask;
}

std::uint64_t sparse_flops_closed_form(PlanMode mode, std::uint64_t n_shots,
                                       std::uint64_t l_shot, std::uint64_t s, std::uint64_t d) {
  if (n_shots <= 1) return 4 * n_shots * l_shot * l_shot * d;
  const std::uint64_t foreign = mode == PlanMode::Dedupe ? (n_shots - 1) * s : n_shots * s;
  return 4 * n_shots * l_shot * (l_shot + foreign) * d;
}

FlopReport sparse_flops(const SparsePlan& plan, std::size_t d) {
  FlopReport report;
  for (std::size_t i = 0; i < plan.kv.size(); ++i) {
    std::uint64_t f = dense_flops(plan.layout.range(i).size(), plan.kv[i].size(), d);
    report.per_shot.push_back(f);
    report.total += f;
  }
  const bool equal_summaries =
      std::all_of(plan.summaries.begin(), plan.summaries.end(), [&](const auto& s) {
        return s.size() == plan.summaries.front().size();
      });
  if (plan.layout.is_uniform() && equal_summaries && !plan.summaries.empty()) {
    report.closed_form =
        sparse_flops_closed_form(plan.mode, plan.num_shots(), plan.layout.range(0).size(),
                                 plan.summaries.front().size(), d);
  }
  return report;
}

std::string plan_manifest(const SparsePlan& plan) {
  std::ostringstream os;
  for (std::size_t i = 0; i < plan.kv.size(); ++i) {
    const TokenRange& r = plan.layout.range(i);
    nlohmann::json rec = {{"shot", i},
                          {"queries", {r.start, r.end}},
                          {"summary", i < plan.summaries.size() ? plan.summaries[i]
                                                                : std::vector<std::size_t>{}},
                          {"kv", plan.kv[i]}};
    os << rec.dump() << '\n';
  }
  return os.str();
}

template PackedKV<double> pack_varlen<double>(const SparsePlan&, const MatrixD&, const MatrixD&);
template PackedKV<float> pack_varlen<float>(const SparsePlan&, const MatrixF&, const MatrixF&);
template MatrixD sparse_self_attention<double>(const MatrixD&, const MatrixD&, const MatrixD&,
                                               const SparsePlan&);
template MatrixF sparse_self_attention<float>(const MatrixF&, const MatrixF&, const MatrixF&,
                                              const SparsePlan&);

}  // namespace multishot
