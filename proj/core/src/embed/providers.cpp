#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

#include "fountain/embed/provider.hpp"
#include "fountain/embed/remote_provider.hpp"
#include "fountain/error.hpp"
#include "fountain/ingest/text.hpp"
#include "fountain/io.hpp"

namespace fountain::embed {

namespace {

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos;
}

bool is_token_byte(unsigned char c) {
  return c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

void hash_double(std::uint64_t& h, double x) {
  char bytes[sizeof(double)];
  std::memcpy(bytes, &x, sizeof(double));
  h = fnv1a(std::string_view(bytes, sizeof(bytes)), h);
}

}  // namespace

EmbeddingVector EmbeddingProvider::embed(std::string_view text) const {
  const std::string copy(text);
  return embed_batch(std::span<const std::string>(&copy, 1)).front();
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(
    std::span<const std::string> texts) const {
  const std::size_t dimension = descriptor().dimension;
  std::vector<EmbeddingVector> out(texts.size(), EmbeddingVector(dimension, 0.0));
  std::vector<std::string> pending;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (is_blank(texts[i])) continue;
    pending.push_back(texts[i]);
    slots.push_back(i);
  }
  if (pending.empty()) return out;
  auto vectors = embed_nonblank(pending);
  if (vectors.size() != pending.size()) {
    throw Error(ErrorCode::kProviderUnavailable,
                "provider returned " + std::to_string(vectors.size()) + " vectors for " +
                    std::to_string(pending.size()) + " texts");
  }
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != dimension) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "provider returned a vector of length " + std::to_string(vectors[k].size()) +
                      ", expected " + std::to_string(dimension),
                  {{"expected", dimension}, {"actual", vectors[k].size()}});
    }
    normalize_in_place(vectors[k]);
    out[slots[k]] = std::move(vectors[k]);
  }
  return out;
}

HashedTokenProvider::HashedTokenProvider(std::size_t dimension) {
  if (dimension == 0) throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
  descriptor_.name = "hashed-token";
  descriptor_.dimension = dimension;
  std::uint64_t h = fnv1a("hashed-token/fnv1a-64/sign-bit-63/v1");
  h = fnv1a(std::to_string(dimension), h);
  descriptor_.fingerprint = hex64(h);
}

std::vector<std::string> HashedTokenProvider::tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 0x20) : ch);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<EmbeddingVector> HashedTokenProvider::embed_nonblank(
    std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    EmbeddingVector v(descriptor_.dimension, 0.0);
    for (const auto& token : tokenize(text)) {
      const std::uint64_t h = fnv1a(token);
      v[h % descriptor_.dimension] += (h >> 63) != 0 ? -1.0 : 1.0;
    }
    out.push_back(std::move(v));
  }
  return out;
}

LookupProvider::LookupProvider(std::string name, std::size_t dimension,
                               std::vector<std::pair<std::string, EmbeddingVector>> entries) {
  if (dimension == 0) throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
  descriptor_.name = std::move(name);
  descriptor_.dimension = dimension;
  std::uint64_t h = fnv1a("lookup/v1");
  h = fnv1a(descriptor_.name, h);
  h = fnv1a(std::to_string(dimension), h);
  for (auto& [text, vector] : entries) {
    if (vector.size() != dimension) {
      throw Error(ErrorCode::kInvalidArgument,
                  "lookup vector for '" + text + "' has length " + std::to_string(vector.size()),
                  {{"text", text}});
    }
    normalize_in_place(vector);
    std::string key = ingest::canonical_text(text);
    if (!table_.emplace(key, std::move(vector)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate lookup text '" + text + "'",
                  {{"text", text}});
    }
  }
  // Hash in key order so the fingerprint ignores entry order.
  for (const auto& [key, vector] : table_) {
    h = fnv1a(key, h);
    h = fnv1a(std::string_view("\0", 1), h);
    for (const double x : vector) hash_double(h, x);
  }
  descriptor_.fingerprint = hex64(h);
}

LookupProvider LookupProvider::from_json_text(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
    std::vector<std::pair<std::string, EmbeddingVector>> entries;
    for (const auto& e : doc.at("entries")) {
      entries.emplace_back(e.at("text").get<std::string>(), e.at("vector").get<EmbeddingVector>());
    }
    return LookupProvider(doc.value("name", std::string("lookup")),
                          doc.at("dimension").get<std::size_t>(), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("invalid lookup fixture: ") + e.what());
  }
}

LookupProvider LookupProvider::from_file(const std::filesystem::path& path) {
  return from_json_text(io::read_file(path));
}

bool LookupProvider::contains(std::string_view text) const {
  return table_.find(ingest::canonical_text(text)) != table_.end();
}

std::vector<EmbeddingVector> LookupProvider::embed_nonblank(
    std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    const auto it = table_.find(ingest::canonical_text(text));
    out.push_back(it == table_.end() ? EmbeddingVector(descriptor_.dimension, 0.0) : it->second);
  }
  return out;
}

std::unique_ptr<EmbeddingProvider> make_provider(std::string_view selector) {
  if (selector == "test") return std::make_unique<HashedTokenProvider>();
  if (selector.starts_with("test:")) {
    const std::string digits(selector.substr(5));
    std::size_t used = 0;
    std::size_t dim = 0;
    try {
      dim = std::stoul(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size()) {
      throw Error(ErrorCode::kInvalidArgument, "bad provider selector '" + std::string(selector) + "'");
    }
    return std::make_unique<HashedTokenProvider>(dim);
  }
  if (selector.starts_with("lookup:")) {
    return std::make_unique<LookupProvider>(LookupProvider::from_file(std::string(selector.substr(7))));
  }
  if (selector.starts_with("http://")) {
    return std::make_unique<RemoteProvider>(std::string(selector));
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown provider '" + std::string(selector) + "'; use test, lookup:<path> or a URL",
              {{"provider", std::string(selector)}});
}

}  // namespace fountain::embed
