#include "fountain/explain/chain.hpp"

#include <algorithm>
#include <map>

#include "fountain/error.hpp"
#include "fountain/graph/schema.hpp"
#include "fountain/ingest/text.hpp"

namespace fountain::explain {

namespace schema = graph::schema;
using graph::Graph;

namespace {

void require_node(const Graph& graph, NodeId id) {
  if (!graph.contains(id)) {
    throw Error(ErrorCode::kUnknownNode, "unknown node " + std::to_string(id.value),
                {{"node", id.value}});
  }
}

std::string text_of(const Graph& graph, NodeId id) {
  return graph::text_prop(graph.node(id).props, std::string(schema::kTextProp)).value_or("");
}

void sort_items(std::vector<ChainItem>& items) {
  std::sort(items.begin(), items.end(), [](const ChainItem& a, const ChainItem& b) {
    if (a.similarity.has_value() != b.similarity.has_value()) return a.similarity.has_value();
    if (a.similarity && *a.similarity != *b.similarity) return *a.similarity > *b.similarity;
    return a.id < b.id;
  });
}

// Each run of CR/LF becomes one space; everything else is kept verbatim.
std::string one_line(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_break = false;
  for (const char c : text) {
    const bool is_break = c == '\r' || c == '\n';
    if (is_break && !in_break) out.push_back(' ');
    if (!is_break) out.push_back(c);
    in_break = is_break;
  }
  return out;
}

nlohmann::json item_json(const ChainItem& item) {
  nlohmann::json j{{"id", item.id.value}, {"text", item.text}};
  j["similarity"] = item.similarity ? nlohmann::json(*item.similarity) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json list_json(const std::vector<ChainItem>& items) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& i : items) arr.push_back(item_json(i));
  return arr;
}

}  // namespace

CausalChain chain_for(NodeId failure, std::optional<NodeId> deviation, const Graph& graph) {
  require_node(graph, failure);
  if (!graph.node(failure).has_label(schema::kFailureMode)) {
    throw Error(ErrorCode::kNotAFailureMode,
                "node " + std::to_string(failure.value) + " is not a failure mode",
                {{"node", failure.value}});
  }
  std::map<NodeId, double> similarity;
  if (deviation) {
    require_node(graph, *deviation);
    const std::string score_key(schema::kScoreProp);
    for (const auto eid : graph.out_edges(*deviation)) {
      const auto& e = graph.edge(eid);
      if (e.type != schema::kSimilarTo) continue;
      const auto score = graph::number_prop(e.props, score_key);
      if (!score) continue;
      auto [it, fresh] = similarity.emplace(e.to, *score);
      if (!fresh) it->second = std::max(it->second, *score);
    }
  }

  CausalChain chain;
  chain.failure = {failure, text_of(graph, failure), std::nullopt};
  for (const auto eid : graph.in_edges(failure)) {
    const auto& e = graph.edge(eid);
    if (e.type != schema::kHasFailureMode || !graph.node(e.from).has_label(schema::kPart)) continue;
    if (!chain.part || e.from < chain.part->id) {
      chain.part = PartRef{
          e.from,
          graph::text_prop(graph.node(e.from).props, std::string(schema::kNameProp)).value_or("")};
    }
  }

  struct Slot {
    std::string_view edge_type;
    std::string_view label;
    std::vector<ChainItem>* items;
    bool scored;
  };
  const Slot slots[] = {{schema::kHasCause, schema::kCause, &chain.causes, true},
                        {schema::kHasEffect, schema::kEffect, &chain.effects, true},
                        {schema::kDetectedBy, schema::kDetection, &chain.detections, true},
                        {schema::kPreventedBy, schema::kPrevention, &chain.preventions, false}};
  for (const auto& slot : slots) {
    std::vector<NodeId> seen;
    for (const auto& n : graph.neighbors(failure, graph::Direction::kOut, slot.edge_type)) {
      if (!graph.node(n.node).has_label(slot.label)) continue;
      if (std::find(seen.begin(), seen.end(), n.node) != seen.end()) continue;
      seen.push_back(n.node);
      ChainItem item{n.node, text_of(graph, n.node), std::nullopt};
      if (slot.scored) {
        if (const auto it = similarity.find(n.node); it != similarity.end()) item.similarity = it->second;
      }
      slot.items->push_back(std::move(item));
    }
    sort_items(*slot.items);
  }
  return chain;
}

std::string render_risk_text(const CausalChain& chain, std::optional<std::string_view> justification) {
  std::string out = "RISK: " + one_line(chain.failure.text) + "\n";
  for (const auto& c : chain.causes) out += "  CAUSE: " + one_line(c.text) + "\n";
  if (justification) {
    if (!ingest::collapse_whitespace(*justification).empty()) {
      out += "  JUSTIFICATION: " + one_line(*justification) + "\n";
    }
  }
  return out;
}

nlohmann::json to_json(const CausalChain& chain) {
  nlohmann::json j;
  j["part"] = chain.part ? nlohmann::json{{"id", chain.part->id.value}, {"name", chain.part->name}}
                         : nlohmann::json(nullptr);
  j["failure"] = {{"id", chain.failure.id.value}, {"text", chain.failure.text}};
  j["causes"] = list_json(chain.causes);
  j["effects"] = list_json(chain.effects);
  j["detections"] = list_json(chain.detections);
  j["preventions"] = list_json(chain.preventions);
  return j;
}

}  // namespace fountain::explain
