#include "fountain/graph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "fountain/error.hpp"
#include "fountain/utf8.hpp"

namespace fountain::graph {

namespace {

[[noreturn]] void unknown_node(NodeId id) {
  throw Error(ErrorCode::kUnknownNode, "unknown node " + std::to_string(id.value),
              {{"node", id.value}});
}

bool indexable(const PropertyValue& v) { return !std::holds_alternative<double>(v); }

}  // namespace

void Graph::validate_props(const PropertyMap& props) {
  for (const auto& [key, value] : props) {
    if (key.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "property key must not be empty");
    }
    if (const auto* d = std::get_if<double>(&value); d != nullptr && !std::isfinite(*d)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite number in property '" + key + "'");
    }
    const auto* text = std::get_if<std::string>(&value);
    if (!is_valid_utf8(key) || (text != nullptr && !is_valid_utf8(*text))) {
      throw Error(ErrorCode::kInvalidArgument, "property '" + key + "' is not valid UTF-8");
    }
  }
}

const Node& Graph::node(NodeId id) const {
  if (!contains(id)) {
    unknown_node(id);
  }
  return nodes_[id.value];
}

const Edge& Graph::edge(EdgeId id) const {
  if (!contains(id)) {
    throw Error(ErrorCode::kInvalidArgument, "unknown edge " + std::to_string(id.value));
  }
  return edges_[id.value];
}

std::span<const EdgeId> Graph::out_edges(NodeId id) const {
  if (!contains(id)) {
    unknown_node(id);
  }
  return out_adj_[id.value];
}

std::span<const EdgeId> Graph::in_edges(NodeId id) const {
  if (!contains(id)) {
    unknown_node(id);
  }
  return in_adj_[id.value];
}

Upserted<NodeId> Graph::upsert_node(LabelSet labels, PropertyMap props,
                                    std::optional<std::string> upsert_key) {
  if (labels.empty()) {
    throw Error(ErrorCode::kEmptyLabels, "a node needs at least one label");
  }
  if (std::any_of(labels.begin(), labels.end(),
                  [](const auto& l) { return l.empty() || !is_valid_utf8(l); })) {
    throw Error(ErrorCode::kInvalidArgument, "labels must be non-empty UTF-8 strings");
  }
  validate_props(props);

  if (upsert_key) {
    const auto it = props.find(*upsert_key);
    if (it == props.end()) {
      throw Error(ErrorCode::kInvalidArgument, "upsert key '" + *upsert_key + "' missing from props");
    }
    const auto existing = find_by_property(*upsert_key, it->second);
    for (const NodeId candidate : existing) {
      if (nodes_[candidate.value].labels == labels) {
        return {candidate, false};
      }
    }
    if (!existing.empty()) {
      throw Error(ErrorCode::kUpsertConflict,
                  "node with the same '" + *upsert_key + "' exists under different labels",
                  {{"existing", existing.front().value}});
    }
  }

  Node node{NodeId{nodes_.size()}, std::move(labels), std::move(props)};
  nodes_.push_back(std::move(node));
  out_adj_.emplace_back();
  in_adj_.emplace_back();
  index_node(nodes_.back());
  return {nodes_.back().id, true};
}

Upserted<EdgeId> Graph::upsert_edge(std::string type, NodeId from, NodeId to, PropertyMap props,
                                    bool dedupe) {
  if (type.empty() || !is_valid_utf8(type)) {
    throw Error(ErrorCode::kInvalidArgument, "edge type must be a non-empty UTF-8 string");
  }
  if (!contains(from) || !contains(to)) {
    throw Error(ErrorCode::kDanglingEndpoint,
                "edge endpoint does not exist",
                {{"from", from.value}, {"to", to.value}});
  }
  validate_props(props);
  if (dedupe) {
    if (auto existing = find_edge(type, from, to)) {
      return {*existing, false};
    }
  }
  edges_.push_back(Edge{EdgeId{edges_.size()}, std::move(type), from, to, std::move(props)});
  index_edge(edges_.back());
  return {edges_.back().id, true};
}

void Graph::index_node(const Node& node) {
  for (const auto& label : node.labels) {
    label_index_[label].push_back(node.id);
  }
  for (const auto& [key, value] : node.props) {
    if (indexable(value)) {
      prop_index_[PropKey{key, value}].push_back(node.id);
    }
  }
}

void Graph::index_edge(const Edge& edge) {
  out_adj_[edge.from.value].push_back(edge.id);
  in_adj_[edge.to.value].push_back(edge.id);
}

std::vector<Neighbor> Graph::neighbors(NodeId id, Direction direction,
                                       std::optional<std::string_view> type_filter) const {
  if (!contains(id)) {
    unknown_node(id);
  }
  std::vector<Neighbor> out;
  auto collect = [&](std::span<const EdgeId> ids, bool outgoing) {
    for (const EdgeId e : ids) {
      const Edge& edge = edges_[e.value];
      if (type_filter && edge.type != *type_filter) {
        continue;
      }
      out.push_back({e, outgoing ? edge.to : edge.from});
    }
  };
  if (direction != Direction::kIn) {
    collect(out_adj_[id.value], true);
  }
  if (direction != Direction::kOut) {
    collect(in_adj_[id.value], false);
  }
  if (direction == Direction::kBoth) {
    std::stable_sort(out.begin(), out.end(),
                     [](const Neighbor& a, const Neighbor& b) { return a.edge < b.edge; });
  }
  return out;
}

std::vector<NodeId> Graph::descendants(NodeId root, std::string_view edge_type,
                                       std::size_t max_depth) const {
  if (!contains(root)) {
    unknown_node(root);
  }
  if (max_depth == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_depth must be positive");
  }
  std::vector<bool> visited(nodes_.size(), false);
  visited[root.value] = true;
  std::deque<std::pair<NodeId, std::size_t>> frontier{{root, 0}};
  std::vector<NodeId> found;
  while (!frontier.empty()) {
    const auto [current, depth] = frontier.front();
    frontier.pop_front();
    if (depth == max_depth) {
      continue;
    }
    for (const EdgeId e : out_adj_[current.value]) {
      const Edge& edge = edges_[e.value];
      if (edge.type != edge_type || visited[edge.to.value]) {
        continue;
      }
      visited[edge.to.value] = true;
      found.push_back(edge.to);
      frontier.emplace_back(edge.to, depth + 1);
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

std::span<const NodeId> Graph::nodes_with_label(std::string_view label) const {
  const auto it = label_index_.find(label);
  if (it == label_index_.end()) {
    return {};
  }
  return it->second;
}

std::vector<NodeId> Graph::find_by_property(const std::string& key,
                                            const PropertyValue& value) const {
  if (indexable(value)) {
    const auto it = prop_index_.find(PropKey{key, value});
    return it == prop_index_.end() ? std::vector<NodeId>{} : it->second;
  }
  std::vector<NodeId> out;
  for (const Node& node : nodes_) {
    const auto it = node.props.find(key);
    if (it != node.props.end() && it->second == value) {
      out.push_back(node.id);
    }
  }
  return out;
}

std::optional<EdgeId> Graph::find_edge(std::string_view type, NodeId from, NodeId to) const {
  if (!contains(from)) {
    return std::nullopt;
  }
  for (const EdgeId e : out_adj_[from.value]) {
    const Edge& edge = edges_[e.value];
    if (edge.to == to && edge.type == type) {
      return e;
    }
  }
  return std::nullopt;
}

void Graph::rollback(Mark mark) {
  while (edges_.size() > mark.edges) {
    const Edge& edge = edges_.back();
    out_adj_[edge.from.value].pop_back();
    in_adj_[edge.to.value].pop_back();
    edges_.pop_back();
  }
  while (nodes_.size() > mark.nodes) {
    const Node& node = nodes_.back();
    for (const auto& label : node.labels) {
      auto it = label_index_.find(label);
      it->second.pop_back();
      if (it->second.empty()) {
        label_index_.erase(it);
      }
    }
    for (const auto& [key, value] : node.props) {
      if (!indexable(value)) {
        continue;
      }
      auto it = prop_index_.find(PropKey{key, value});
      it->second.pop_back();
      if (it->second.empty()) {
        prop_index_.erase(it);
      }
    }
    out_adj_.pop_back();
    in_adj_.pop_back();
    nodes_.pop_back();
  }
}

void Graph::restore_node(Node node) {
  if (node.id.value != nodes_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "restored node id " + std::to_string(node.id.value) + " is not the next id " +
                    std::to_string(nodes_.size()));
  }
  if (node.labels.empty()) {
    throw Error(ErrorCode::kEmptyLabels, "a node needs at least one label");
  }
  validate_props(node.props);
  nodes_.push_back(std::move(node));
  out_adj_.emplace_back();
  in_adj_.emplace_back();
  index_node(nodes_.back());
}

void Graph::restore_edge(Edge edge) {
  if (edge.id.value != edges_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "restored edge id " + std::to_string(edge.id.value) + " is not the next id " +
                    std::to_string(edges_.size()));
  }
  if (!contains(edge.from) || !contains(edge.to)) {
    throw Error(ErrorCode::kDanglingEndpoint, "edge endpoint does not exist");
  }
  if (edge.type.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "edge type must not be empty");
  }
  validate_props(edge.props);
  edges_.push_back(std::move(edge));
  index_edge(edges_.back());
}

}  // namespace fountain::graph
