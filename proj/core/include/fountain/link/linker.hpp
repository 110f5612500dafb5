#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fountain/embed/cache.hpp"
#include "fountain/graph/graph.hpp"
#include "fountain/ingest/text.hpp"

namespace fountain::link {

using graph::NodeId;

struct LinkerConfig {
  double tau_link = 0.45;
  double tau_claim = 0.50;
  std::size_t top_k = 5;
  // HAS_CHILD hops below the selected part; 0 scopes the part alone.
  std::size_t scope_depth = graph::kUnlimitedDepth;

  // Throws kInvalidArgument when a threshold leaves [0, 1] or top_k is 0.
  void validate() const;
};

struct DeviationRequest {
  std::string part_ref;
  std::string current_definition;
  std::string requested_deviation;
};

enum class Role { kCause, kEffect, kDetection, kClaim };
enum class SourceText { kCurrent, kRequested };

std::string_view to_string(Role role);
std::string_view to_string(SourceText source);

struct Candidate {
  NodeId node;
  Role role;
  bool operator==(const Candidate&) const = default;
};

struct Match {
  NodeId node;
  Role role;
  double similarity = 0.0;
  SourceText source = SourceText::kRequested;
  bool operator==(const Match&) const = default;
};

struct Recommendation {
  NodeId failure;
  std::string failure_text;
  double score = 0.0;
  std::vector<Match> matched;  // similarity desc, then node id
  std::vector<Match> claims;   // linked claims filed against the failure's own part
  bool operator==(const Recommendation&) const = default;
};

struct RecommendResult {
  NodeId deviation;
  NodeId part;
  std::vector<Recommendation> recommendations;  // score desc, then failure id
  std::vector<Match> claims;                    // every linked claim in scope
};

using Clock = std::function<std::chrono::system_clock::time_point()>;

// External part id first, then a case-insensitive match of the
// synonym-normalized ref against part names. Throws kPartNotFound (details
// carry up to 3 name suggestions ranked by character-bigram overlap) or
// kAmbiguousPart (details list the candidates).
NodeId resolve_part(std::string_view part_ref, const ingest::SynonymMap& synonyms,
                    const graph::Graph& graph);

// The part plus its HAS_CHILD descendants within config.scope_depth, ascending.
std::vector<NodeId> part_scope(NodeId part, const LinkerConfig& config, const graph::Graph& graph);

// Cause/Effect/Detection nodes of every failure mode in the part scope, and
// WarrantyClaim nodes filed against a part in scope. Ascending by node id.
std::vector<Candidate> candidate_scope(NodeId part, const LinkerConfig& config,
                                       const graph::Graph& graph);

// Read-only half of recommend(): everything except the Deviation node.
struct ScoredDeviation {
  DeviationRequest request;
  std::string current_norm;
  std::string requested_norm;
  NodeId part;
  std::vector<Recommendation> recommendations;
  std::vector<Match> claims;
};

ScoredDeviation score_deviation(const DeviationRequest& request, const LinkerConfig& config,
                                const ingest::SynonymMap& synonyms, const graph::Graph& graph,
                                const embed::CachedEmbedder& embedder);

// Writes the Deviation node with CONCERNS_PART, SIMILAR_TO (retained matches
// and linked claims) and RECOMMENDS edges. All-or-nothing.
RecommendResult persist_deviation(const ScoredDeviation& scored, graph::Graph& graph,
                                  const Clock& clock);

// score_deviation followed by persist_deviation.
RecommendResult recommend(const DeviationRequest& request, const LinkerConfig& config,
                          const ingest::SynonymMap& synonyms, graph::Graph& graph,
                          const embed::CachedEmbedder& embedder, const Clock& clock);

// Scores the claims in the deviation's part scope against its stored texts
// and persists SIMILAR_TO edges for those at or above tau_claim. Sorted by
// similarity desc, then node id. Throws kUnknownNode.
std::vector<Match> link_claims(NodeId deviation, const LinkerConfig& config, graph::Graph& graph,
                               const embed::CachedEmbedder& embedder);

// Jaccard similarity of the character-bigram sets of the canonical texts.
double bigram_jaccard(std::string_view a, std::string_view b);

std::string format_timestamp(std::chrono::system_clock::time_point t);

}  // namespace fountain::link
