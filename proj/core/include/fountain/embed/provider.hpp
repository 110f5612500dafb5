#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fountain/embed/vector.hpp"

namespace fountain::embed {

struct ProviderDescriptor {
  std::string name;
  std::size_t dimension = 0;
  // Changes whenever the provider would map some text to a different vector.
  std::string fingerprint;
};

// Text -> vector model. Implementations only see non-blank texts; blank ones
// map to the zero vector here, and every returned vector is renormalized.
// embed()/embed_batch() may be called from several threads at once.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual ProviderDescriptor descriptor() const = 0;

  EmbeddingVector embed(std::string_view text) const;
  // Result order matches input order. Throws kProviderUnavailable or
  // kDimensionMismatch.
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const;

 protected:
  virtual std::vector<EmbeddingVector> embed_nonblank(std::span<const std::string> texts) const = 0;
};

// Deterministic bag-of-tokens model: ASCII-lowercased tokens (runs of ASCII
// alphanumerics or bytes >= 0x80) are hashed with FNV-1a into `dimension`
// buckets, signed by hash bit 63, summed and L2-normalized.
class HashedTokenProvider final : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDefaultDimension = 256;
  explicit HashedTokenProvider(std::size_t dimension = kDefaultDimension);

  ProviderDescriptor descriptor() const override { return descriptor_; }
  static std::vector<std::string> tokenize(std::string_view text);

 protected:
  std::vector<EmbeddingVector> embed_nonblank(std::span<const std::string> texts) const override;

 private:
  ProviderDescriptor descriptor_;
};

// Fixed text -> vector table. Texts are matched after casefolding and
// whitespace collapsing; unknown texts map to the zero vector.
class LookupProvider final : public EmbeddingProvider {
 public:
  // Throws kInvalidArgument on wrong-length vectors or duplicate texts.
  LookupProvider(std::string name, std::size_t dimension,
                 std::vector<std::pair<std::string, EmbeddingVector>> entries);

  // {"name": ..., "dimension": d, "entries": [{"text": ..., "vector": [...]}, ...]}
  static LookupProvider from_json_text(std::string_view json_text);
  static LookupProvider from_file(const std::filesystem::path& path);

  ProviderDescriptor descriptor() const override { return descriptor_; }
  bool contains(std::string_view text) const;

 protected:
  std::vector<EmbeddingVector> embed_nonblank(std::span<const std::string> texts) const override;

 private:
  ProviderDescriptor descriptor_;
  std::map<std::string, EmbeddingVector, std::less<>> table_;
};

// "test" | "test:<dimension>" | "lookup:<path>" | "http://host:port[/prefix]".
// Throws kInvalidArgument on an unrecognized selector.
std::unique_ptr<EmbeddingProvider> make_provider(std::string_view selector);

}  // namespace fountain::embed
