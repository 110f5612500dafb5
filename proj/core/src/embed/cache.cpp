#include "fountain/embed/cache.hpp"

#include <mutex>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "fountain/error.hpp"
#include "fountain/graph/schema.hpp"

namespace fountain::embed {

namespace {

constexpr std::string_view kCacheFormat = "fountain-embeddings";
constexpr int kCacheVersion = 1;

std::string header_line() {
  return nlohmann::json{{"format", kCacheFormat}, {"version", kCacheVersion}}.dump() + "\n";
}

}  // namespace

std::string EmbeddingCache::text_hash(std::string_view text) { return hex64(fnv1a(text)); }

std::string EmbeddingCache::key(std::string_view fingerprint, std::string_view th) {
  std::string k(fingerprint);
  k.push_back('/');
  k.append(th);
  return k;
}

EmbeddingCache::EmbeddingCache(const std::filesystem::path& path, bool sync) {
  std::string kept = header_line();
  bool rewrite = true;
  if (std::filesystem::exists(path)) {
    const std::string content = io::read_file(path);
    const io::Lines lines = io::split_lines(content);
    bool header_ok = false;
    if (!lines.lines.empty()) {
      try {
        const auto h = nlohmann::json::parse(lines.lines.front());
        header_ok = h.value("format", "") == kCacheFormat && h.value("version", 0) == kCacheVersion;
      } catch (const nlohmann::json::exception&) {
      }
    }
    if (header_ok) {
      bool dropped = lines.torn_tail;
      for (std::size_t i = 1; i < lines.lines.size(); ++i) {
        try {
          const auto r = nlohmann::json::parse(lines.lines[i]);
          auto v = r.at("v").get<EmbeddingVector>();
          entries_.insert_or_assign(key(r.at("fp").get<std::string>(), r.at("th").get<std::string>()),
                                    std::move(v));
          kept.append(lines.lines[i]);
          kept.push_back('\n');
        } catch (const nlohmann::json::exception&) {
          dropped = true;
        }
      }
      rewrite = dropped;
    }
  }
  if (rewrite) io::write_file_atomic(path, kept);
  file_ = io::AppendFile(path, sync);
}

std::optional<EmbeddingVector> EmbeddingCache::get(std::string_view fingerprint,
                                                   std::string_view text) const {
  const std::string k = key(fingerprint, text_hash(text));
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(k);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::put(std::string_view fingerprint, std::string_view text,
                         const EmbeddingVector& vector) {
  const std::string copy(text);
  put_many(fingerprint, std::span<const std::string>(&copy, 1),
           std::span<const EmbeddingVector>(&vector, 1));
}

void EmbeddingCache::put_many(std::string_view fingerprint, std::span<const std::string> texts,
                              std::span<const EmbeddingVector> vectors) {
  if (texts.size() != vectors.size()) {
    throw Error(ErrorCode::kInvalidArgument, "put_many: texts and vectors differ in length");
  }
  std::string records;
  std::vector<std::pair<std::string, const EmbeddingVector*>> staged;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const std::string th = text_hash(texts[i]);
    if (file_.is_open()) {
      records += nlohmann::json{{"fp", fingerprint}, {"th", th}, {"v", vectors[i]}}.dump();
      records.push_back('\n');
    }
    staged.emplace_back(key(fingerprint, th), &vectors[i]);
  }
  std::unique_lock lock(mutex_);
  if (file_.is_open() && !records.empty()) file_.append(records);
  for (auto& [k, v] : staged) entries_.insert_or_assign(std::move(k), *v);
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<EmbeddingVector> CachedEmbedder::embed_batch(std::span<const std::string> texts) const {
  const std::string fp = provider_.descriptor().fingerprint;
  std::vector<EmbeddingVector> out(texts.size());
  std::vector<std::string> misses;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (auto hit = cache_.get(fp, texts[i])) {
      out[i] = std::move(*hit);
    } else {
      misses.push_back(texts[i]);
      slots.push_back(i);
    }
  }
  if (misses.empty()) return out;
  auto fresh = provider_.embed_batch(misses);
  cache_.put_many(fp, misses, fresh);
  for (std::size_t k = 0; k < slots.size(); ++k) out[slots[k]] = std::move(fresh[k]);
  return out;
}

EmbeddingVector CachedEmbedder::embed(std::string_view text) const {
  const std::string copy(text);
  return embed_batch(std::span<const std::string>(&copy, 1)).front();
}

std::vector<std::string> graph_texts(const graph::Graph& graph) {
  namespace schema = graph::schema;
  static constexpr std::string_view kLabels[] = {schema::kCause, schema::kEffect,
                                                 schema::kDetection, schema::kWarrantyClaim};
  std::set<graph::NodeId> ids;
  for (const auto label : kLabels) {
    for (const auto id : graph.nodes_with_label(label)) ids.insert(id);
  }
  std::vector<std::string> texts;
  std::unordered_set<std::string> seen;
  const std::string norm_key(schema::kNormProp);
  for (const auto id : ids) {
    auto text = graph::text_prop(graph.node(id).props, norm_key);
    if (text && seen.insert(*text).second) texts.push_back(std::move(*text));
  }
  return texts;
}

EnsureResult ensure_graph_embeddings(const graph::Graph& graph, const EmbeddingProvider& provider,
                                     EmbeddingCache& cache, std::size_t batch_size) {
  if (batch_size == 0) throw Error(ErrorCode::kInvalidArgument, "batch_size must be positive");
  EnsureResult result;
  const auto texts = graph_texts(graph);
  if (texts.empty()) return result;
  const std::string fp = provider.descriptor().fingerprint;
  std::vector<std::string> missing;
  for (const auto& t : texts) {
    if (cache.get(fp, t)) {
      ++result.reused;
    } else {
      missing.push_back(t);
    }
  }
  for (std::size_t start = 0; start < missing.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, missing.size() - start);
    const std::span<const std::string> batch(missing.data() + start, n);
    const auto vectors = provider.embed_batch(batch);
    cache.put_many(fp, batch, vectors);
    result.embedded += n;
  }
  return result;
}

}  // namespace fountain::embed
