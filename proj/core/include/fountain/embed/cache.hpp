#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fountain/embed/provider.hpp"
#include "fountain/graph/graph.hpp"
#include "fountain/io.hpp"

namespace fountain::embed {

// (provider fingerprint, text hash) -> vector, optionally backed by a JSONL
// file:
//   {"format":"fountain-embeddings","version":1}
//   {"fp":"<fingerprint>","th":"<fnv1a hex of text>","v":[...]}
// The cache is derived data: unreadable records and a torn last line are
// dropped on open. Lookups are concurrent; puts are serialized.
class EmbeddingCache {
 public:
  EmbeddingCache() = default;
  explicit EmbeddingCache(const std::filesystem::path& path, bool sync = false);

  std::optional<EmbeddingVector> get(std::string_view fingerprint, std::string_view text) const;
  void put(std::string_view fingerprint, std::string_view text, const EmbeddingVector& vector);
  // One file write for the whole batch.
  void put_many(std::string_view fingerprint, std::span<const std::string> texts,
                std::span<const EmbeddingVector> vectors);

  std::size_t size() const;
  static std::string text_hash(std::string_view text);

 private:
  static std::string key(std::string_view fingerprint, std::string_view th);

  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, EmbeddingVector> entries_;
  io::AppendFile file_;
};

// Provider front-end that consults the cache first and stores misses.
class CachedEmbedder {
 public:
  CachedEmbedder(const EmbeddingProvider& provider, EmbeddingCache& cache)
      : provider_(provider), cache_(cache) {}

  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const;
  EmbeddingVector embed(std::string_view text) const;

  const EmbeddingProvider& provider() const { return provider_; }
  EmbeddingCache& cache() const { return cache_; }

 private:
  const EmbeddingProvider& provider_;
  EmbeddingCache& cache_;
};

struct EnsureResult {
  std::size_t embedded = 0;  // distinct texts sent to the provider
  std::size_t reused = 0;    // distinct texts already cached
  bool operator==(const EnsureResult&) const = default;
};

// Distinct normalized texts of Cause, Effect, Detection and WarrantyClaim
// nodes, in first-seen node order.
std::vector<std::string> graph_texts(const graph::Graph& graph);

// Embeds every graph text missing from the cache, `batch_size` texts per
// provider call. Each finished batch is stored before the next starts, so a
// ProviderUnavailable midway keeps the progress made.
EnsureResult ensure_graph_embeddings(const graph::Graph& graph, const EmbeddingProvider& provider,
                                     EmbeddingCache& cache, std::size_t batch_size = 64);

}  // namespace fountain::embed
