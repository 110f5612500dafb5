#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fountain/graph/graph.hpp"

namespace fountain::explain {

using graph::NodeId;

struct ChainItem {
  NodeId id;
  std::string text;
  std::optional<double> similarity;  // from the deviation's SIMILAR_TO edge
  bool operator==(const ChainItem&) const = default;
};

struct PartRef {
  NodeId id;
  std::string name;
  bool operator==(const PartRef&) const = default;
};

// Part -> FailureMode -> {Cause, Effect, Detection, Prevention}. Each list is
// sorted by similarity desc then id, unmatched items after matched ones.
struct CausalChain {
  std::optional<PartRef> part;  // lowest-id Part with HAS_FAILURE_MODE into the failure
  ChainItem failure;
  std::vector<ChainItem> causes;
  std::vector<ChainItem> effects;
  std::vector<ChainItem> detections;
  std::vector<ChainItem> preventions;
  bool operator==(const CausalChain&) const = default;
};

// Throws kUnknownNode for a missing failure or deviation id, kNotAFailureMode
// when `failure` is not labelled FailureMode.
CausalChain chain_for(NodeId failure, std::optional<NodeId> deviation, const graph::Graph& graph);

// RISK: <failure>\n, then "  CAUSE: <cause>\n" per cause, then
// "  JUSTIFICATION: <text>\n" when a non-blank justification is given. Line
// breaks inside texts are folded to single spaces so each entry stays on its
// line.
std::string render_risk_text(const CausalChain& chain,
                             std::optional<std::string_view> justification = std::nullopt);

nlohmann::json to_json(const CausalChain& chain);

}  // namespace fountain::explain
