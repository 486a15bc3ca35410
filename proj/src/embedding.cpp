// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#include "multishot/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "multishot/error.hpp"
#include "multishot/random.hpp"

namespace multishot {

Embedding normalized(Embedding v) {
  double norm2 = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteInput, "embedding is not finite");
    norm2 += x * x;
  }
  if (v.empty() || norm2 == 0.0) throw Error(ErrorCode::EmptyInput, "zero or empty embedding");
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

std::vector<Embedding> embed_all(const EmbeddingProvider& provider,
                                 const std::vector<std::string>& ids) {
  std::vector<Embedding> out(ids.size());
  const std::size_t workers =
      provider.concurrent_safe() ? std::max(1u, std::thread::hardware_concurrency()) : 1;
  if (workers == 1 || ids.size() < 2) {
    for (std::size_t i = 0; i < ids.size(); ++i) out[i] = provider.embed(ids[i]);
    return out;
  }
  std::vector<std::future<void>> tasks;
  for (std::size_t w = 0; w < workers; ++w) {
    tasks.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < ids.size(); i += workers) out[i] = provider.embed(ids[i]);
    }));
  }
  for (auto& t : tasks) t.get();
  return out;
}

TableEmbeddingProvider::TableEmbeddingProvider(std::map<std::string, Embedding> table) {
  for (auto& [id, vec] : table) {
    if (dim_ == 0) dim_ = vec.size();
    if (vec.size() != dim_) {
      throw Error(ErrorCode::LayoutMismatch, "embedding '" + id + "' has dimension " +
                                                 std::to_string(vec.size()) + ", expected " +
                                                 std::to_string(dim_));
    }
    double norm2 = 0.0;
    for (double x : vec) norm2 += x * x;
    Embedding unit = normalized(vec);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6) normalized_.push_back(id);
    table_.emplace(id, std::move(unit));
  }
}

Embedding TableEmbeddingProvider::embed(const std::string& segment_id) const {
  auto it = table_.find(segment_id);
  if (it == table_.end()) {
    throw Error(ErrorCode::IndexOutOfBounds, "no embedding for segment '" + segment_id + "'");
  }
  return it->second;
}

Embedding HashEmbeddingProvider::embed(const std::string& segment_id) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : segment_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  Rng rng(h ^ seed_);
  Embedding v(dim_);
  for (double& x : v) x = rng.normal();
  return normalized(std::move(v));
}

}  // namespace multishot
