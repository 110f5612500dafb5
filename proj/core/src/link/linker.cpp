#include "fountain/link/linker.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "fountain/error.hpp"
#include "fountain/graph/schema.hpp"
#include "fountain/query/executor.hpp"

namespace fountain::link {

namespace schema = graph::schema;
using graph::Graph;
using graph::PropertyMap;

namespace {

void require_node(const Graph& graph, NodeId id) {
  if (!graph.contains(id)) {
    throw Error(ErrorCode::kUnknownNode, "unknown node " + std::to_string(id.value),
                {{"node", id.value}});
  }
}

std::string node_text(const Graph& graph, NodeId id) {
  const auto& props = graph.node(id).props;
  if (auto norm = graph::text_prop(props, std::string(schema::kNormProp))) return *norm;
  return graph::text_prop(props, std::string(schema::kTextProp)).value_or("");
}

bool match_order(const Match& a, const Match& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.node < b.node;
}

struct Queries {
  embed::EmbeddingVector current;
  embed::EmbeddingVector requested;
};

Queries embed_queries(std::string_view current_norm, std::string_view requested_norm,
                      const embed::CachedEmbedder& embedder) {
  const std::vector<std::string> texts{std::string(current_norm), std::string(requested_norm)};
  auto vectors = embedder.provider().embed_batch(texts);
  return {std::move(vectors[0]), std::move(vectors[1])};
}

// Similarity of every candidate: the better of the two query texts, ties
// credited to the requested deviation.
std::vector<Match> score_candidates(const std::vector<Candidate>& candidates, const Queries& q,
                                    const Graph& graph, const embed::CachedEmbedder& embedder) {
  std::vector<std::string> texts;
  texts.reserve(candidates.size());
  for (const auto& c : candidates) texts.push_back(node_text(graph, c.node));
  const auto vectors = embedder.embed_batch(texts);
  std::vector<Match> out;
  out.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double sc = embed::cosine(q.current, vectors[i]);
    const double sr = embed::cosine(q.requested, vectors[i]);
    out.push_back({candidates[i].node, candidates[i].role, std::max(sc, sr),
                   sr >= sc ? SourceText::kRequested : SourceText::kCurrent});
  }
  return out;
}

std::optional<Role> role_for_edge(const Graph& graph, const graph::Edge& edge) {
  const auto& target = graph.node(edge.to);
  if (edge.type == schema::kHasCause && target.has_label(schema::kCause)) return Role::kCause;
  if (edge.type == schema::kHasEffect && target.has_label(schema::kEffect)) return Role::kEffect;
  if (edge.type == schema::kDetectedBy && target.has_label(schema::kDetection)) {
    return Role::kDetection;
  }
  return std::nullopt;
}

// Failure modes attached to the scoped parts, each with the parts it hangs off.
std::map<NodeId, std::vector<NodeId>> scoped_failures(const std::vector<NodeId>& parts,
                                                      const Graph& graph) {
  std::map<NodeId, std::vector<NodeId>> out;
  for (const NodeId p : parts) {
    for (const auto& n : graph.neighbors(p, graph::Direction::kOut, schema::kHasFailureMode)) {
      if (!graph.node(n.node).has_label(schema::kFailureMode)) continue;
      auto& owners = out[n.node];
      if (owners.empty() || owners.back() != p) owners.push_back(p);
    }
  }
  return out;
}

std::vector<NodeId> claims_in(const std::vector<NodeId>& parts, const Graph& graph) {
  std::set<NodeId> out;
  for (const NodeId p : parts) {
    for (const auto& n : graph.neighbors(p, graph::Direction::kIn, schema::kClaimFor)) {
      if (graph.node(n.node).has_label(schema::kWarrantyClaim)) out.insert(n.node);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<Match> filter_claims(std::vector<Match> scored, double tau) {
  std::erase_if(scored, [&](const Match& m) { return m.role != Role::kClaim || m.similarity < tau; });
  std::sort(scored.begin(), scored.end(), match_order);
  return scored;
}

std::vector<std::string> bigrams(std::string_view s) {
  const std::string c = ingest::canonical_text(s);
  std::vector<std::string> out;
  if (c.size() == 1) out.push_back(c);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) out.push_back(c.substr(i, 2));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void LinkerConfig::validate() const {
  const auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(tau_link) || !in_unit(tau_claim)) {
    throw Error(ErrorCode::kInvalidArgument, "thresholds must lie in [0, 1]",
                {{"tau_link", tau_link}, {"tau_claim", tau_claim}});
  }
  if (top_k == 0) throw Error(ErrorCode::kInvalidArgument, "top_k must be at least 1");
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kCause: return "cause";
    case Role::kEffect: return "effect";
    case Role::kDetection: return "detection";
    case Role::kClaim: return "claim";
  }
  return "cause";
}

std::string_view to_string(SourceText source) {
  return source == SourceText::kCurrent ? "current" : "requested";
}

double bigram_jaccard(std::string_view a, std::string_view b) {
  const auto x = bigrams(a);
  const auto y = bigrams(b);
  if (x.empty() && y.empty()) return 0.0;
  std::vector<std::string> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
  const std::size_t uni = x.size() + y.size() - common.size();
  return static_cast<double>(common.size()) / static_cast<double>(uni);
}

NodeId resolve_part(std::string_view part_ref, const ingest::SynonymMap& synonyms,
                    const Graph& graph) {
  const std::string ref = ingest::collapse_whitespace(part_ref);
  if (ref.empty()) throw Error(ErrorCode::kInvalidArgument, "part_ref must not be empty");

  const auto rows = query::run("MATCH (p:Part {id: $ref}) RETURN p", {{"ref", ref}}, graph);
  if (!rows.empty()) {
    // Part ids are unique per upsert key, so the lowest id is the only one.
    return std::get<NodeId>(rows.front().front());
  }

  const std::string wanted = ingest::canonical_text(ingest::normalize_text(ref, synonyms));
  const std::string name_key(schema::kNameProp);
  const std::string id_key(schema::kIdProp);
  std::vector<NodeId> hits;
  for (const NodeId id : graph.nodes_with_label(schema::kPart)) {
    const auto name = graph::text_prop(graph.node(id).props, name_key);
    if (name && ingest::canonical_text(*name) == wanted) hits.push_back(id);
  }
  const auto describe = [&](NodeId id) {
    const auto& props = graph.node(id).props;
    return nlohmann::json{{"node", id.value},
                          {"id", graph::text_prop(props, id_key).value_or("")},
                          {"name", graph::text_prop(props, name_key).value_or("")}};
  };
  if (hits.size() == 1) return hits.front();
  if (hits.size() > 1) {
    nlohmann::json candidates = nlohmann::json::array();
    for (const NodeId id : hits) candidates.push_back(describe(id));
    throw Error(ErrorCode::kAmbiguousPart, "part '" + ref + "' matches several parts",
                {{"part_ref", ref}, {"candidates", candidates}});
  }

  struct Suggestion {
    double score;
    std::string name;
    NodeId id;
  };
  std::vector<Suggestion> ranked;
  for (const NodeId id : graph.nodes_with_label(schema::kPart)) {
    const auto name = graph::text_prop(graph.node(id).props, name_key);
    if (!name) continue;
    const double s = std::max(bigram_jaccard(wanted, *name), bigram_jaccard(ref, *name));
    if (s > 0.0) ranked.push_back({s, *name, id});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Suggestion& a, const Suggestion& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.name != b.name) return a.name < b.name;
    return a.id < b.id;
  });
  if (ranked.size() > 3) ranked.resize(3);
  nlohmann::json suggestions = nlohmann::json::array();
  for (const auto& s : ranked) suggestions.push_back(describe(s.id));
  throw Error(ErrorCode::kPartNotFound, "no part matches '" + ref + "'",
              {{"part_ref", ref}, {"suggestions", suggestions}});
}

std::vector<NodeId> part_scope(NodeId part, const LinkerConfig& config, const Graph& graph) {
  require_node(graph, part);
  std::vector<NodeId> out{part};
  if (config.scope_depth > 0) {
    for (const NodeId d : graph.descendants(part, schema::kHasChild, config.scope_depth)) {
      out.push_back(d);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Candidate> candidate_scope(NodeId part, const LinkerConfig& config, const Graph& graph) {
  const auto parts = part_scope(part, config, graph);
  std::map<NodeId, Role> found;
  for (const auto& [fm, owners] : scoped_failures(parts, graph)) {
    for (const auto eid : graph.out_edges(fm)) {
      const auto& edge = graph.edge(eid);
      if (auto role = role_for_edge(graph, edge)) found.emplace(edge.to, *role);
    }
  }
  for (const NodeId c : claims_in(parts, graph)) found.emplace(c, Role::kClaim);
  std::vector<Candidate> out;
  out.reserve(found.size());
  for (const auto& [id, role] : found) out.push_back({id, role});
  return out;
}

ScoredDeviation score_deviation(const DeviationRequest& request, const LinkerConfig& config,
                                const ingest::SynonymMap& synonyms, const Graph& graph,
                                const embed::CachedEmbedder& embedder) {
  config.validate();
  if (ingest::collapse_whitespace(request.requested_deviation).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "requested_deviation must not be empty");
  }
  ScoredDeviation out;
  out.request = request;
  out.part = resolve_part(request.part_ref, synonyms, graph);
  out.current_norm = ingest::normalize_text(request.current_definition, synonyms);
  out.requested_norm = ingest::normalize_text(request.requested_deviation, synonyms);

  const auto parts = part_scope(out.part, config, graph);
  const auto candidates = candidate_scope(out.part, config, graph);
  const Queries q = embed_queries(out.current_norm, out.requested_norm, embedder);
  const auto scored = score_candidates(candidates, q, graph, embedder);
  std::map<NodeId, const Match*> by_node;
  for (const auto& m : scored) by_node.emplace(m.node, &m);

  out.claims = filter_claims(scored, config.tau_claim);

  for (const auto& [fm, owners] : scoped_failures(parts, graph)) {
    Recommendation rec;
    rec.failure = fm;
    for (const auto eid : graph.out_edges(fm)) {
      const auto& edge = graph.edge(eid);
      if (!role_for_edge(graph, edge)) continue;
      const Match& m = *by_node.at(edge.to);
      if (m.similarity < config.tau_link) continue;
      if (std::any_of(rec.matched.begin(), rec.matched.end(),
                      [&](const Match& x) { return x.node == m.node; })) {
        continue;
      }
      rec.matched.push_back(m);
    }
    if (rec.matched.empty()) continue;
    std::sort(rec.matched.begin(), rec.matched.end(), match_order);
    rec.score = rec.matched.front().similarity;
    rec.failure_text = graph::text_prop(graph.node(fm).props, std::string(schema::kTextProp)).value_or("");
    const auto own_claims = claims_in(owners, graph);
    for (const auto& c : out.claims) {
      if (std::binary_search(own_claims.begin(), own_claims.end(), c.node)) rec.claims.push_back(c);
    }
    out.recommendations.push_back(std::move(rec));
  }
  std::sort(out.recommendations.begin(), out.recommendations.end(),
            [](const Recommendation& a, const Recommendation& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.failure < b.failure;
            });
  if (out.recommendations.size() > config.top_k) out.recommendations.resize(config.top_k);
  return out;
}

std::string format_timestamp(std::chrono::system_clock::time_point t) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t secs = static_cast<std::time_t>(ms / 1000 - (ms % 1000 < 0 ? 1 : 0));
  const int millis = static_cast<int>(((ms % 1000) + 1000) % 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, millis);
  return buf;
}

namespace {

void add_similar(Graph& g, NodeId deviation, const Match& m, std::set<NodeId>& linked) {
  if (!linked.insert(m.node).second) return;
  g.create_edge(std::string(schema::kSimilarTo), deviation, m.node,
                {{std::string(schema::kScoreProp), m.similarity},
                 {"source_text", std::string(to_string(m.source))}});
}

std::set<NodeId> existing_similar(const Graph& g, NodeId deviation) {
  std::set<NodeId> out;
  for (const auto& n : g.neighbors(deviation, graph::Direction::kOut, schema::kSimilarTo)) {
    out.insert(n.node);
  }
  return out;
}

}  // namespace

RecommendResult persist_deviation(const ScoredDeviation& scored, Graph& graph, const Clock& clock) {
  require_node(graph, scored.part);
  return graph.apply_batch([&](Graph& g) {
    schema::ensure_schema(g);
    PropertyMap props{{"current_definition", scored.request.current_definition},
                      {"requested_deviation", scored.request.requested_deviation},
                      {"current_norm", scored.current_norm},
                      {"requested_norm", scored.requested_norm},
                      {"part_ref", scored.request.part_ref},
                      {"created_at", format_timestamp(clock())}};
    const std::string key = "deviation:" + std::to_string(g.node_count());
    RecommendResult result;
    result.deviation = schema::upsert_instance(g, schema::kDeviation, key, std::move(props)).id;
    result.part = scored.part;
    g.create_edge(std::string(schema::kConcernsPart), result.deviation, scored.part);
    std::set<NodeId> linked;
    for (const auto& rec : scored.recommendations) {
      for (const auto& m : rec.matched) add_similar(g, result.deviation, m, linked);
    }
    for (const auto& c : scored.claims) add_similar(g, result.deviation, c, linked);
    std::int64_t rank = 0;
    for (const auto& rec : scored.recommendations) {
      g.create_edge(std::string(schema::kRecommends), result.deviation, rec.failure,
                    {{"rank", ++rank}, {std::string(schema::kScoreProp), rec.score}});
    }
    result.recommendations = scored.recommendations;
    result.claims = scored.claims;
    return result;
  });
}

RecommendResult recommend(const DeviationRequest& request, const LinkerConfig& config,
                          const ingest::SynonymMap& synonyms, Graph& graph,
                          const embed::CachedEmbedder& embedder, const Clock& clock) {
  return persist_deviation(score_deviation(request, config, synonyms, graph, embedder), graph,
                           clock);
}

std::vector<Match> link_claims(NodeId deviation, const LinkerConfig& config, Graph& graph,
                               const embed::CachedEmbedder& embedder) {
  config.validate();
  require_node(graph, deviation);
  if (!graph.node(deviation).has_label(schema::kDeviation)) {
    throw Error(ErrorCode::kUnknownNode, "node " + std::to_string(deviation.value) +
                                             " is not a deviation",
                {{"node", deviation.value}});
  }
  const auto parts_of = graph.neighbors(deviation, graph::Direction::kOut, schema::kConcernsPart);
  if (parts_of.empty()) return {};
  const auto& props = graph.node(deviation).props;
  const Queries q = embed_queries(graph::text_prop(props, "current_norm").value_or(""),
                                  graph::text_prop(props, "requested_norm").value_or(""), embedder);
  std::vector<Candidate> candidates;
  for (const NodeId c : claims_in(part_scope(parts_of.front().node, config, graph), graph)) {
    candidates.push_back({c, Role::kClaim});
  }
  auto claims = filter_claims(score_candidates(candidates, q, graph, embedder), config.tau_claim);
  graph.apply_batch([&](Graph& g) {
    auto linked = existing_similar(g, deviation);
    for (const auto& c : claims) add_similar(g, deviation, c, linked);
  });
  return claims;
}

}  // namespace fountain::link
