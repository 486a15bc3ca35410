// Copyright 2026 The multishot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "multishot/metrics.hpp"

namespace multishot {

/// Maps a media or text segment id to a unit-norm feature vector of fixed
/// dimension. Real feature extractors live outside this library and are
/// plugged in through this interface.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  virtual Embedding embed(const std::string& segment_id) const = 0;
  /// False when embed() must not be called from several threads at once.
  virtual bool concurrent_safe() const { return true; }
};

/// Embeds every id, fanning out across threads when the provider allows it.
/// Output order always follows `ids`.
std::vector<Embedding> embed_all(const EmbeddingProvider& provider,
                                 const std::vector<std::string>& ids);

/// Hand-specified vectors, e.g. loaded from an embedding file. Vectors are
/// normalized on construction; ids whose input norm was off by more than 1e-6
/// are listed in normalized_ids().
class TableEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit TableEmbeddingProvider(std::map<std::string, Embedding> table);

  std::size_t dimension() const override { return dim_; }
  Embedding embed(const std::string& segment_id) const override;

  const std::vector<std::string>& normalized_ids() const { return normalized_; }
  const std::map<std::string, Embedding>& table() const { return table_; }

 private:
  std::map<std::string, Embedding> table_;
  std::size_t dim_ = 0;
  std::vector<std::string> normalized_;
};

/// Deterministic pseudo-random unit vectors keyed by FNV-1a(id) ^ seed. For
/// tests and demos only; similarity between distinct ids is noise.
class HashEmbeddingProvider final : public EmbeddingProvider {
 public:
  HashEmbeddingProvider(std::size_t dimension, std::uint64_t seed)
      : dim_(dimension), seed_(seed) {}

  std::size_t dimension() const override { return dim_; }
  Embedding embed(const std::string& segment_id) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

/// Scales `v` to unit length. Throws EmptyInput for zero vectors and
/// NonFiniteInput for NaN/Inf entries.
Embedding normalized(Embedding v);

}  // namespace multishot
