#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "fountain/embed/provider.hpp"

namespace fountain::embed {

// Out-of-process model behind `POST <base>/embed`, request
// {"texts": [...]}, response {"model": name, "dimension": d, "vectors": [...],
// "version"?: v}. The descriptor is learned from the first response.
class RemoteProvider final : public EmbeddingProvider {
 public:
  explicit RemoteProvider(std::string base_url,
                          std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~RemoteProvider() override;

  // Probes the endpoint with an empty batch on first use.
  ProviderDescriptor descriptor() const override;

  // Fingerprint for a (name, dimension, version) triple; an absent version
  // hashes as the empty string.
  static std::string fingerprint_for(std::string_view name, std::size_t dimension,
                                     std::string_view version);

 protected:
  std::vector<EmbeddingVector> embed_nonblank(std::span<const std::string> texts) const override;

 private:
  struct Reply {
    ProviderDescriptor descriptor;
    std::vector<EmbeddingVector> vectors;
  };
  Reply post(std::span<const std::string> texts) const;
  void remember(const ProviderDescriptor& d) const;

  std::string scheme_host_port_;
  std::string path_;
  std::chrono::milliseconds timeout_;
  mutable std::mutex mutex_;
  mutable std::optional<ProviderDescriptor> descriptor_;
};

}  // namespace fountain::embed
