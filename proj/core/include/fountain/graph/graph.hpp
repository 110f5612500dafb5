#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fountain/graph/property.hpp"

namespace fountain::graph {

struct NodeId {
  std::uint64_t value = 0;
  constexpr auto operator<=>(const NodeId&) const = default;
};

struct EdgeId {
  std::uint64_t value = 0;
  constexpr auto operator<=>(const EdgeId&) const = default;
};

using LabelSet = std::set<std::string, std::less<>>;

struct Node {
  NodeId id;
  LabelSet labels;
  PropertyMap props;

  bool has_label(std::string_view label) const { return labels.find(label) != labels.end(); }
  bool operator==(const Node&) const = default;
};

struct Edge {
  EdgeId id;
  std::string type;
  NodeId from;
  NodeId to;
  PropertyMap props;

  bool operator==(const Edge&) const = default;
};

enum class Direction { kOut, kIn, kBoth };

struct Neighbor {
  EdgeId edge;
  NodeId node;
  bool operator==(const Neighbor&) const = default;
};

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

template <typename Id>
struct Upserted {
  Id id;
  bool created = false;
};

// Append-only labelled property graph. Ids are dense and assigned in creation
// order; every listing is in ascending id order.
//
// Not internally synchronized: a Graph value may be read from many threads at
// once, but mutation requires exclusive access (the service wraps it in a
// shared_mutex).
class Graph {
 public:
  Graph() = default;

  // Creates a node, or with `upsert_key` returns an existing node that carries
  // the same labels and the same value under that key.
  Upserted<NodeId> upsert_node(LabelSet labels, PropertyMap props,
                               std::optional<std::string> upsert_key = std::nullopt);
  NodeId create_node(LabelSet labels, PropertyMap props,
                     std::optional<std::string> upsert_key = std::nullopt) {
    return upsert_node(std::move(labels), std::move(props), std::move(upsert_key)).id;
  }

  // With `dedupe`, an existing edge with identical (type, from, to) is reused
  // and its props are left as they were.
  Upserted<EdgeId> upsert_edge(std::string type, NodeId from, NodeId to, PropertyMap props,
                               bool dedupe);
  EdgeId create_edge(std::string type, NodeId from, NodeId to, PropertyMap props = {},
                     bool dedupe = false) {
    return upsert_edge(std::move(type), from, to, std::move(props), dedupe).id;
  }

  bool contains(NodeId id) const { return id.value < nodes_.size(); }
  bool contains(EdgeId id) const { return id.value < edges_.size(); }
  const Node& node(NodeId id) const;
  const Edge& edge(EdgeId id) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const EdgeId> out_edges(NodeId id) const;
  std::span<const EdgeId> in_edges(NodeId id) const;

  // Incident edges in ascending edge id order. A self loop shows up twice
  // under kBoth, once per direction.
  std::vector<Neighbor> neighbors(NodeId id, Direction direction,
                                  std::optional<std::string_view> type_filter = std::nullopt) const;

  // Nodes reachable from `root` within `max_depth` hops of `edge_type`,
  // excluding `root`, ascending.
  std::vector<NodeId> descendants(NodeId root, std::string_view edge_type,
                                  std::size_t max_depth = kUnlimitedDepth) const;

  std::span<const NodeId> nodes_with_label(std::string_view label) const;
  std::vector<NodeId> find_by_property(const std::string& key, const PropertyValue& value) const;
  std::optional<EdgeId> find_edge(std::string_view type, NodeId from, NodeId to) const;

  struct Mark {
    std::size_t nodes = 0;
    std::size_t edges = 0;
  };
  Mark mark() const { return {nodes_.size(), edges_.size()}; }
  // Drops everything created after `mark`.
  void rollback(Mark mark);

  // Runs `fn(*this)`; if it throws, every node and edge it created is removed
  // before the exception propagates.
  template <typename Fn>
  decltype(auto) apply_batch(Fn&& fn) {
    const Mark before = mark();
    try {
      return std::forward<Fn>(fn)(*this);
    } catch (...) {
      rollback(before);
      throw;
    }
  }

  // Re-inserts a record with a known id; used by snapshot and journal replay.
  // The id must equal the next id to be allocated.
  void restore_node(Node node);
  void restore_edge(Edge edge);

  bool operator==(const Graph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  using PropKey = std::pair<std::string, PropertyValue>;

  void index_node(const Node& node);
  void index_edge(const Edge& edge);
  static void validate_props(const PropertyMap& props);

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_adj_;
  std::vector<std::vector<EdgeId>> in_adj_;
  std::map<std::string, std::vector<NodeId>, std::less<>> label_index_;
  // Doubles are not indexed; lookups on them scan.
  std::map<PropKey, std::vector<NodeId>> prop_index_;
};

}  // namespace fountain::graph
