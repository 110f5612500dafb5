#include "fountain/embed/remote_provider.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "fountain/error.hpp"

namespace fountain::embed {

namespace {

[[noreturn]] void unavailable(const std::string& what) {
  throw Error(ErrorCode::kProviderUnavailable, "embedding provider unavailable: " + what,
              {{"detail", what}});
}

}  // namespace

RemoteProvider::RemoteProvider(std::string base_url, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "provider URL needs a scheme: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_port_ = base_url;
  } else {
    scheme_host_port_ = base_url.substr(0, path_start);
    path_ = base_url.substr(path_start);
  }
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  path_ += "/embed";
}

RemoteProvider::~RemoteProvider() = default;

std::string RemoteProvider::fingerprint_for(std::string_view name, std::size_t dimension,
                                            std::string_view version) {
  std::uint64_t h = fnv1a("remote/v1");
  h = fnv1a(name, h);
  h = fnv1a(std::string_view("\0", 1), h);
  h = fnv1a(std::to_string(dimension), h);
  h = fnv1a(std::string_view("\0", 1), h);
  h = fnv1a(version, h);
  return hex64(h);
}

ProviderDescriptor RemoteProvider::descriptor() const {
  {
    std::lock_guard lock(mutex_);
    if (descriptor_) return *descriptor_;
  }
  const Reply reply = post({});
  remember(reply.descriptor);
  return reply.descriptor;
}

void RemoteProvider::remember(const ProviderDescriptor& d) const {
  std::lock_guard lock(mutex_);
  descriptor_ = d;
}

RemoteProvider::Reply RemoteProvider::post(std::span<const std::string> texts) const {
  httplib::Client client(scheme_host_port_);
  if (!client.is_valid()) unavailable("invalid endpoint " + scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  nlohmann::json body = {{"texts", nlohmann::json::array()}};
  for (const auto& t : texts) body["texts"].push_back(t);
  const auto res = client.Post(path_, body.dump(), "application/json");
  if (!res) unavailable(httplib::to_string(res.error()));
  if (res->status != 200) unavailable("HTTP " + std::to_string(res->status));

  Reply reply;
  try {
    const auto doc = nlohmann::json::parse(res->body);
    reply.descriptor.name = doc.at("model").get<std::string>();
    reply.descriptor.dimension = doc.at("dimension").get<std::size_t>();
    std::string version;
    if (doc.contains("version")) {
      const auto& v = doc.at("version");
      version = v.is_string() ? v.get<std::string>() : v.dump();
    }
    reply.descriptor.fingerprint =
        fingerprint_for(reply.descriptor.name, reply.descriptor.dimension, version);
    reply.vectors = doc.at("vectors").get<std::vector<EmbeddingVector>>();
  } catch (const nlohmann::json::exception& e) {
    unavailable(std::string("malformed response: ") + e.what());
  }
  if (reply.descriptor.dimension == 0) unavailable("malformed response: dimension 0");
  if (reply.vectors.size() != texts.size()) {
    unavailable("expected " + std::to_string(texts.size()) + " vectors, got " +
                std::to_string(reply.vectors.size()));
  }
  return reply;
}

std::vector<EmbeddingVector> RemoteProvider::embed_nonblank(
    std::span<const std::string> texts) const {
  Reply reply = post(texts);
  remember(reply.descriptor);
  return std::move(reply.vectors);
}

}  // namespace fountain::embed
