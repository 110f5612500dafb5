#include "fountain/service/service.hpp"

#include <charconv>
#include <iostream>

#include "fountain/embed/vector.hpp"
#include "fountain/eval/feedback_summary.hpp"
#include "fountain/explain/chain.hpp"
#include "fountain/graph/schema.hpp"
#include "fountain/graph/snapshot.hpp"
#include "fountain/ingest/loaders.hpp"
#include "fountain/io.hpp"

namespace fountain::service {

namespace schema = graph::schema;
using graph::NodeId;
using nlohmann::json;

namespace {

[[noreturn]] void bad_request(const std::string& message, json details = nullptr) {
  throw Error(ErrorCode::kInvalidArgument, message, std::move(details));
}

std::string require_string(const json& body, const char* key) {
  if (!body.contains(key)) bad_request(std::string("missing field '") + key + "'", {{"field", key}});
  if (!body[key].is_string()) bad_request(std::string("field '") + key + "' must be a string", {{"field", key}});
  return body[key].get<std::string>();
}

std::optional<std::string> optional_string(const json& body, const char* key) {
  if (!body.contains(key) || body[key].is_null()) return std::nullopt;
  if (!body[key].is_string()) bad_request(std::string("field '") + key + "' must be a string", {{"field", key}});
  return body[key].get<std::string>();
}

NodeId require_id(const json& body, const char* key) {
  if (!body.contains(key)) bad_request(std::string("missing field '") + key + "'", {{"field", key}});
  const auto& v = body[key];
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    bad_request(std::string("field '") + key + "' must be a non-negative integer node id", {{"field", key}});
  }
  return NodeId{v.get<std::uint64_t>()};
}

void require_object(const json& body) {
  if (!body.is_object()) bad_request("request body must be a JSON object");
}

NodeId parse_path_id(std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kUnknownNode, "unknown node '" + std::string(text) + "'",
                {{"node", std::string(text)}});
  }
  return NodeId{v};
}

void require_deviation(const graph::Graph& g, NodeId id) {
  if (!g.contains(id) || !g.node(id).has_label(schema::kDeviation)) {
    throw Error(ErrorCode::kUnknownDeviation, "unknown deviation " + std::to_string(id.value),
                {{"deviation_id", id.value}});
  }
}

std::string raw_text(const graph::Graph& g, NodeId id) {
  return graph::text_prop(g.node(id).props, std::string(schema::kTextProp)).value_or("");
}

json match_json(const graph::Graph& g, const link::Match& m) {
  json j{{"node_id", m.node.value},
         {"role", link::to_string(m.role)},
         {"similarity", m.similarity},
         {"source_text", link::to_string(m.source)},
         {"text", raw_text(g, m.node)}};
  if (m.role == link::Role::kClaim) {
    j["claim_id"] = graph::text_prop(g.node(m.node).props, std::string(schema::kIdProp)).value_or("");
  }
  return j;
}

json matches_json(const graph::Graph& g, const std::vector<link::Match>& ms) {
  json arr = json::array();
  for (const auto& m : ms) arr.push_back(match_json(g, m));
  return arr;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownNode:
    case ErrorCode::kPartNotFound:
    case ErrorCode::kNotAFailureMode:
    case ErrorCode::kUnknownDeviation:
      return 404;
    case ErrorCode::kAmbiguousPart:
    case ErrorCode::kBusy:
    case ErrorCode::kUpsertConflict:
      return 409;
    case ErrorCode::kProviderUnavailable:
    case ErrorCode::kDimensionMismatch:
      return 503;
    case ErrorCode::kIoError:
    case ErrorCode::kFormatVersionMismatch:
    case ErrorCode::kCorruptRecord:
      return 500;
    default:
      return 400;
  }
}

json error_body(const Error& e) {
  return {{"error", {{"code", to_string(e.code())}, {"message", e.what()}, {"details", e.details()}}}};
}

Service::Service(ServiceConfig config, std::unique_ptr<embed::EmbeddingProvider> provider,
                 link::Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)), provider_(std::move(provider)) {
  config_.linker.validate();
  std::error_code ec;
  std::filesystem::create_directories(config_.data_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError, "cannot create data directory " + config_.data_dir.string() +
                                         ": " + ec.message());
  }
  if (std::filesystem::exists(config_.snapshot_path())) {
    graph_ = graph::snapshot_load(config_.snapshot_path());
  }
  journal_ = std::make_unique<GraphJournal>(config_.journal_path(), config_.sync_writes);
  journal_->replay(graph_);
  if (std::filesystem::exists(config_.synonyms_file())) {
    synonyms_ = ingest::parse_synonyms(io::read_file(config_.synonyms_file()));
  } else if (config_.synonyms_path) {
    synonyms_ = ingest::parse_synonyms(io::read_file(*config_.synonyms_path));
  }
  feedback_ = std::make_unique<FeedbackLog>(config_.feedback_path(), config_.sync_writes);
  if (!provider_) provider_ = embed::make_provider(config_.provider);
  cache_ = std::make_unique<embed::EmbeddingCache>(config_.embeddings_path());
  warm_embeddings();
  if (config_.snapshot_interval_seconds > 0) {
    snapshot_thread_ = std::thread([this] { snapshot_loop(); });
  }
}

Service::~Service() {
  {
    std::lock_guard lock(loop_mutex_);
    stopping_ = true;
  }
  loop_cv_.notify_all();
  if (snapshot_thread_.joinable()) snapshot_thread_.join();
}

Response Service::guarded(const std::function<Response()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e)};
  } catch (const json::exception& e) {
    return {400, error_body(Error(ErrorCode::kInvalidArgument, e.what()))};
  } catch (const std::exception& e) {
    return {500, {{"error", {{"code", "Internal"}, {"message", e.what()}, {"details", nullptr}}}}};
  }
}

std::int64_t Service::now_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(clock_().time_since_epoch()).count();
}

ingest::SynonymMap Service::synonyms() const {
  std::lock_guard lock(synonyms_mutex_);
  return synonyms_;
}

void Service::commit(graph::Graph::Mark mark) {
  try {
    journal_->append(graph_, mark);
  } catch (...) {
    graph_.rollback(mark);
    throw;
  }
}

void Service::warm_embeddings() {
  try {
    std::shared_lock lock(graph_mutex_);
    embed::ensure_graph_embeddings(graph_, *provider_, *cache_);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kProviderUnavailable) throw;
    std::cerr << "fountain: embedding warm-up incomplete: " << e.what() << "\n";
  }
}

Response Service::create_deviation(const json& body) {
  return guarded([&] {
    require_object(body);
    link::DeviationRequest request;
    request.part_ref = require_string(body, "part_ref");
    request.requested_deviation = require_string(body, "requested_deviation");
    request.current_definition = optional_string(body, "current_definition").value_or("");
    if (ingest::collapse_whitespace(request.requested_deviation).empty()) {
      bad_request("requested_deviation must not be empty", {{"field", "requested_deviation"}});
    }
    const auto syn = synonyms();
    const embed::CachedEmbedder embedder(*provider_, *cache_);
    link::ScoredDeviation scored;
    {
      std::shared_lock lock(graph_mutex_);
      scored = link::score_deviation(request, config_.linker, syn, graph_, embedder);
    }
    std::unique_lock lock(graph_mutex_);
    const auto mark = graph_.mark();
    const auto result = link::persist_deviation(scored, graph_, clock_);
    commit(mark);

    const auto& part_props = graph_.node(result.part).props;
    json out{{"deviation_id", result.deviation.value},
             {"part",
              {{"node_id", result.part.value},
               {"id", graph::text_prop(part_props, std::string(schema::kIdProp)).value_or("")},
               {"name", graph::text_prop(part_props, std::string(schema::kNameProp)).value_or("")}}}};
    json recs = json::array();
    for (const auto& rec : result.recommendations) {
      recs.push_back({{"failure_id", rec.failure.value},
                      {"failure_text", rec.failure_text},
                      {"score", rec.score},
                      {"matched", matches_json(graph_, rec.matched)},
                      {"claims", matches_json(graph_, rec.claims)},
                      {"chain", explain::to_json(explain::chain_for(rec.failure, result.deviation, graph_))}});
    }
    out["recommendations"] = std::move(recs);
    out["claims"] = matches_json(graph_, result.claims);
    return Response{201, std::move(out)};
  });
}

Response Service::explanation(std::string_view failure_id, std::optional<std::string_view> deviation_id) {
  return guarded([&] {
    const NodeId failure = parse_path_id(failure_id);
    std::shared_lock lock(graph_mutex_);
    std::optional<NodeId> deviation;
    if (deviation_id) {
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(deviation_id->data(), deviation_id->data() + deviation_id->size(), v);
      if (deviation_id->empty() || ec != std::errc() || ptr != deviation_id->data() + deviation_id->size()) {
        throw Error(ErrorCode::kUnknownDeviation, "unknown deviation '" + std::string(*deviation_id) + "'",
                    {{"deviation_id", std::string(*deviation_id)}});
      }
      deviation = NodeId{v};
      require_deviation(graph_, *deviation);
    }
    return Response{200, explain::to_json(explain::chain_for(failure, deviation, graph_))};
  });
}

Response Service::submit_feedback(const json& body) {
  return guarded([&] {
    require_object(body);
    eval::FeedbackRecord record;
    const NodeId deviation = require_id(body, "deviation_id");
    const NodeId item = require_id(body, "item_ref");
    const std::string verdict = require_string(body, "verdict");
    const auto parsed = eval::parse_verdict(verdict);
    if (!parsed) bad_request("verdict must be 'useful' or 'not_useful'", {{"verdict", verdict}});
    if (body.contains("selected") && !body["selected"].is_boolean()) bad_request("field 'selected' must be a boolean");
    record.deviation_id = deviation.value;
    record.item_ref = item.value;
    record.verdict = *parsed;
    record.selected = body.value("selected", false);
    record.justification = optional_string(body, "justification");
    record.user_ref = optional_string(body, "user_ref");
    {
      std::shared_lock lock(graph_mutex_);
      require_deviation(graph_, deviation);
      if (!graph_.contains(item) || !(graph_.node(item).has_label(schema::kFailureMode) ||
                                      graph_.node(item).has_label(schema::kWarrantyClaim))) {
        throw Error(ErrorCode::kUnknownNode,
                    "item " + std::to_string(item.value) + " is not a failure mode or claim",
                    {{"item_ref", item.value}});
      }
    }
    const auto stored = feedback_->append(std::move(record), now_ms());
    return Response{201, {{"feedback_id", stored.feedback_id}}};
  });
}

Response Service::risk_text(const json& body) {
  return guarded([&] {
    require_object(body);
    const NodeId deviation = require_id(body, "deviation_id");
    const NodeId failure = require_id(body, "failure_id");
    const auto justification = optional_string(body, "justification");
    std::string text;
    {
      std::shared_lock lock(graph_mutex_);
      require_deviation(graph_, deviation);
      text = explain::render_risk_text(explain::chain_for(failure, deviation, graph_), justification);
    }
    eval::FeedbackRecord record;
    record.deviation_id = deviation.value;
    record.item_ref = failure.value;
    record.verdict = eval::Verdict::kUseful;
    record.selected = true;
    record.justification = justification;
    record.user_ref = optional_string(body, "user_ref");
    const auto stored = feedback_->append(std::move(record), now_ms());
    return Response{200, {{"text", text}, {"feedback_id", stored.feedback_id}}};
  });
}

Response Service::ingest(std::string_view kind, std::string_view csv_text, bool allow_orphans) {
  return guarded([&] {
    std::unique_lock busy(ingest_mutex_, std::try_to_lock);
    if (!busy.owns_lock()) {
      throw Error(ErrorCode::kBusy, "another ingest is in progress");
    }
    if (kind == "synonyms") {
      auto parsed = ingest::parse_synonyms(csv_text);
      io::write_file_atomic(config_.synonyms_file(), ingest::render_synonyms(parsed));
      const std::size_t terms = parsed.entries().size();
      std::lock_guard lock(synonyms_mutex_);
      synonyms_ = std::move(parsed);
      return Response{200, {{"terms", terms}}};
    }
    const auto syn = synonyms();
    const ingest::LoadOptions options{allow_orphans};
    json counts;
    {
      std::unique_lock lock(graph_mutex_);
      const auto mark = graph_.mark();
      if (kind == "bom") {
        const auto r = ingest::load_bom(graph_, csv_text);
        counts = {{"parts_created", r.parts_created}, {"edges_created", r.edges_created},
                  {"root", r.root.value}};
      } else if (kind == "fmea") {
        const auto r = ingest::load_fmea(graph_, csv_text, syn, options);
        counts = {{"records_read", r.records_read}, {"chains_created", r.chains_created},
                  {"duplicates_dropped", r.duplicates_dropped}};
      } else if (kind == "claims") {
        const auto r = ingest::load_claims(graph_, csv_text, syn, options);
        counts = {{"claims_created", r.claims_created}};
      } else {
        bad_request("unknown ingest kind '" + std::string(kind) + "'", {{"kind", std::string(kind)}});
      }
      commit(mark);
    }
    warm_embeddings();
    return Response{200, counts};
  });
}

json Service::snapshot_locked() {
  const std::size_t records = graph::snapshot_save(graph_, config_.snapshot_path());
  journal_->reset();
  return {{"path", config_.snapshot_path().string()},
          {"records", records},
          {"nodes", graph_.node_count()},
          {"edges", graph_.edge_count()}};
}

Response Service::snapshot() {
  return guarded([&] {
    std::unique_lock lock(graph_mutex_);
    return Response{200, snapshot_locked()};
  });
}

void Service::snapshot_loop() {
  std::unique_lock lock(loop_mutex_);
  const auto interval = std::chrono::seconds(config_.snapshot_interval_seconds);
  while (!loop_cv_.wait_for(lock, interval, [this] { return stopping_; })) {
    try {
      std::unique_lock graph_lock(graph_mutex_);
      snapshot_locked();
    } catch (const std::exception& e) {
      std::cerr << "fountain: periodic snapshot failed: " << e.what() << "\n";
    }
  }
}

Response Service::feedback_stats() {
  return guarded([&] {
    eval::RecommendedItems items;
    {
      std::shared_lock lock(graph_mutex_);
      for (const NodeId d : graph_.nodes_with_label(schema::kDeviation)) {
        auto& list = items[d.value];
        for (const auto& n : graph_.neighbors(d, graph::Direction::kOut)) {
          const auto& e = graph_.edge(n.edge);
          const bool recommended = e.type == schema::kRecommends;
          const bool claim = e.type == schema::kSimilarTo &&
                             graph_.node(n.node).has_label(schema::kWarrantyClaim);
          if (recommended || claim) list.push_back(n.node.value);
        }
      }
    }
    return Response{200, eval::summarize_feedback(feedback_->records(), items).to_json()};
  });
}

Response Service::health() {
  return guarded([&] {
    json out{{"status", "ok"}, {"feedback_records", feedback_->size()}};
    {
      std::shared_lock lock(graph_mutex_);
      out["nodes"] = graph_.node_count();
      out["edges"] = graph_.edge_count();
    }
    try {
      const auto d = provider_->descriptor();
      out["provider"] = {{"name", d.name}, {"dimension", d.dimension}, {"fingerprint", d.fingerprint}};
    } catch (const Error& e) {
      out["provider"] = {{"error", e.what()}};
    }
    return Response{200, out};
  });
}

std::string Service::state_hash() const {
  std::uint64_t h = embed::kFnvOffset;
  {
    std::shared_lock lock(graph_mutex_);
    h = embed::fnv1a(graph::serialize_snapshot(graph_), h);
  }
  for (const auto& r : feedback_->records()) h = embed::fnv1a(eval::to_json(r).dump(), h);
  h = embed::fnv1a(ingest::render_synonyms(synonyms()), h);
  return embed::hex64(h);
}

}  // namespace fountain::service
