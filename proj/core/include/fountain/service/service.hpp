#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "fountain/embed/cache.hpp"
#include "fountain/embed/provider.hpp"
#include "fountain/error.hpp"
#include "fountain/graph/graph.hpp"
#include "fountain/ingest/text.hpp"
#include "fountain/link/linker.hpp"
#include "fountain/service/config.hpp"
#include "fountain/service/feedback_log.hpp"
#include "fountain/service/journal.hpp"

namespace fountain::service {

struct Response {
  int status = 200;
  nlohmann::json body;
};

// HTTP status for an error code.
int http_status(ErrorCode code);
// {"error": {"code", "message", "details"}}
nlohmann::json error_body(const Error& e);

// Transport-independent assistant: every public method maps one endpoint and
// never throws; failures come back as an error Response.
//
// State lives in the data directory: graph snapshot plus journal, the
// feedback log, the embedding cache and the synonym table. The graph is
// multi-reader/single-writer; ingests are additionally serialized and a
// second concurrent ingest is refused with 409.
class Service {
 public:
  // `provider` overrides config.provider; `clock` drives timestamps.
  explicit Service(ServiceConfig config, std::unique_ptr<embed::EmbeddingProvider> provider = nullptr,
                   link::Clock clock = std::chrono::system_clock::now);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // POST /api/v1/deviations
  Response create_deviation(const nlohmann::json& body);
  // GET /api/v1/failures/{id}/explanation[?deviation=<id>]
  Response explanation(std::string_view failure_id, std::optional<std::string_view> deviation_id);
  // POST /api/v1/feedback
  Response submit_feedback(const nlohmann::json& body);
  // POST /api/v1/risk-text
  Response risk_text(const nlohmann::json& body);
  // POST /api/v1/admin/ingest/{bom|fmea|claims|synonyms}
  Response ingest(std::string_view kind, std::string_view csv_text, bool allow_orphans = false);
  // POST /api/v1/admin/snapshot
  Response snapshot();
  // GET /api/v1/stats/feedback
  Response feedback_stats();
  // GET /api/v1/health
  Response health();

  // Hash over graph, feedback log and synonyms; equal before and after any
  // read-only call.
  std::string state_hash() const;

  const ServiceConfig& config() const { return config_; }
  const embed::EmbeddingProvider& provider() const { return *provider_; }

  // Runs `fn(const Graph&)` under the read lock.
  template <typename Fn>
  decltype(auto) read_graph(Fn&& fn) const {
    std::shared_lock lock(graph_mutex_);
    return std::forward<Fn>(fn)(static_cast<const graph::Graph&>(graph_));
  }

 private:
  Response guarded(const std::function<Response()>& fn);
  std::int64_t now_ms() const;
  ingest::SynonymMap synonyms() const;
  // Caller holds the write lock. Appends to the journal, or rolls the graph
  // back to `mark` if that fails.
  void commit(graph::Graph::Mark mark);
  void warm_embeddings();
  void snapshot_loop();
  nlohmann::json snapshot_locked();

  ServiceConfig config_;
  link::Clock clock_;
  std::unique_ptr<embed::EmbeddingProvider> provider_;
  std::unique_ptr<embed::EmbeddingCache> cache_;

  mutable std::shared_mutex graph_mutex_;
  graph::Graph graph_;
  std::unique_ptr<GraphJournal> journal_;
  std::unique_ptr<FeedbackLog> feedback_;

  mutable std::mutex synonyms_mutex_;
  ingest::SynonymMap synonyms_;

  std::mutex ingest_mutex_;

  std::mutex loop_mutex_;
  std::condition_variable loop_cv_;
  bool stopping_ = false;
  std::thread snapshot_thread_;
};

}  // namespace fountain::service
