#include "fountain/query/executor.hpp"

#include <algorithm>
#include <optional>

#include "fountain/error.hpp"
#include "fountain/query/parser.hpp"

namespace fountain::query {

using graph::Edge;
using graph::EdgeId;
using graph::Graph;
using graph::Node;
using graph::NodeId;
using graph::PropertyValue;

bool evaluate_comparison(const PropertyValue& lhs, CompareOp op, const PropertyValue& rhs) {
  if (op == CompareOp::kContains) {
    const auto* a = std::get_if<std::string>(&lhs);
    const auto* b = std::get_if<std::string>(&rhs);
    return a != nullptr && b != nullptr && a->find(*b) != std::string::npos;
  }
  const auto order = graph::compare_values(lhs, rhs);
  if (!order) {
    return false;
  }
  switch (op) {
    case CompareOp::kEq: return *order == std::partial_ordering::equivalent;
    case CompareOp::kNe:
      return *order == std::partial_ordering::less || *order == std::partial_ordering::greater;
    case CompareOp::kLt: return *order == std::partial_ordering::less;
    case CompareOp::kGt: return *order == std::partial_ordering::greater;
    case CompareOp::kLe:
      return *order == std::partial_ordering::less || *order == std::partial_ordering::equivalent;
    case CompareOp::kGe:
      return *order == std::partial_ordering::greater ||
             *order == std::partial_ordering::equivalent;
    case CompareOp::kContains: break;
  }
  return false;
}

namespace {

struct Binding {
  bool is_node = true;
  std::size_t position = 0;
};

struct ResolvedNode {
  const std::string* label = nullptr;
  std::vector<std::pair<const std::string*, PropertyValue>> props;
  std::optional<std::size_t> same_as;  // earlier position bound to the same variable
};

const PropertyValue& resolve_param(const QueryParams& params, const std::string& name) {
  const auto it = params.find(name);
  if (it == params.end()) {
    throw Error(ErrorCode::kMissingParam, "no value bound for parameter $" + name,
                {{"name", name}});
  }
  return it->second;
}

class Matcher {
 public:
  Matcher(const QueryAst& ast, const QueryParams& params, const Graph& graph)
      : ast_(ast), params_(params), graph_(graph) {
    const std::size_t n = ast.nodes.size();
    resolved_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& pattern = ast.nodes[i];
      auto& r = resolved_[i];
      if (pattern.label) r.label = &*pattern.label;
      for (const auto& c : pattern.props) {
        if (const auto* param = std::get_if<ParamRef>(&c.value)) {
          r.props.emplace_back(&c.key, resolve_param(params, param->name));
        } else {
          r.props.emplace_back(&c.key, std::get<PropertyValue>(c.value));
        }
      }
      if (pattern.var) {
        const auto [it, inserted] = bindings_.emplace(*pattern.var, Binding{true, i});
        if (!inserted) r.same_as = it->second.position;
      }
    }
    for (std::size_t i = 0; i < ast.rels.size(); ++i) {
      if (ast.rels[i].var) bindings_.emplace(*ast.rels[i].var, Binding{false, i});
    }
    for (const auto& p : ast.where) {
      check_params(p.lhs);
      check_params(p.rhs);
    }
    nodes_.assign(n, NodeId{});
    edges_.assign(ast.rels.size(), EdgeId{});
  }

  std::vector<std::pair<std::vector<NodeId>, std::vector<EdgeId>>> run() {
    if (graph_.node_count() == 0) {
      return {};
    }
    const std::size_t seed = choose_seed();
    order_.clear();
    order_.push_back(seed);
    for (std::size_t i = seed + 1; i < ast_.nodes.size(); ++i) order_.push_back(i);
    for (std::size_t i = seed; i-- > 0;) order_.push_back(i);

    bound_.assign(ast_.nodes.size(), false);
    for (const NodeId candidate : seed_candidates_) {
      if (node_matches(seed, candidate)) {
        nodes_[seed] = candidate;
        bound_.assign(ast_.nodes.size(), false);
        bound_[seed] = true;
        extend(1);
      }
    }
    return std::move(matches_);
  }

 private:
  void check_params(const Operand& op) const {
    if (const auto* param = std::get_if<ParamRef>(&op)) {
      resolve_param(params_, param->name);
    }
  }

  std::size_t choose_seed() {
    std::size_t best = 0;
    std::optional<std::size_t> best_cost;
    std::vector<NodeId> best_candidates;
    bool best_is_all = false;
    for (std::size_t i = 0; i < resolved_.size(); ++i) {
      const auto& r = resolved_[i];
      if (!r.props.empty()) {
        auto found = graph_.find_by_property(*r.props.front().first, r.props.front().second);
        if (!best_cost || found.size() < *best_cost) {
          best = i;
          best_cost = found.size();
          best_candidates = std::move(found);
          best_is_all = false;
        }
      } else if (r.label) {
        const auto labelled = graph_.nodes_with_label(*r.label);
        if (!best_cost || labelled.size() < *best_cost) {
          best = i;
          best_cost = labelled.size();
          best_candidates.assign(labelled.begin(), labelled.end());
          best_is_all = false;
        }
      } else if (!best_cost) {
        best = i;
        best_cost = graph_.node_count();
        best_is_all = true;
      }
    }
    if (best_is_all) {
      best_candidates.clear();
      for (const Node& node : graph_.nodes()) best_candidates.push_back(node.id);
    }
    seed_candidates_ = std::move(best_candidates);
    return best;
  }

  bool node_matches(std::size_t position, NodeId id) const {
    const auto& r = resolved_[position];
    const Node& node = graph_.node(id);
    if (r.label && !node.has_label(*r.label)) return false;
    for (const auto& [key, value] : r.props) {
      const auto it = node.props.find(*key);
      if (it == node.props.end() || !evaluate_comparison(it->second, CompareOp::kEq, value)) {
        return false;
      }
    }
    if (r.same_as && bound_[*r.same_as] && nodes_[*r.same_as] != id) return false;
    // Variable also bound at a later position that is already assigned.
    if (ast_.nodes[position].var) {
      for (std::size_t j = 0; j < nodes_.size(); ++j) {
        if (j != position && bound_[j] && ast_.nodes[j].var == ast_.nodes[position].var &&
            nodes_[j] != id) {
          return false;
        }
      }
    }
    return true;
  }

  bool edge_used(EdgeId id, std::size_t except_rel) const {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (i != except_rel && rel_bound(i) && edges_[i] == id) return true;
    }
    return false;
  }

  bool rel_bound(std::size_t rel) const { return bound_[rel] && bound_[rel + 1]; }

  void extend(std::size_t step) {
    if (step == order_.size()) {
      if (where_holds()) matches_.emplace_back(nodes_, edges_);
      return;
    }
    const std::size_t target = order_[step];
    const bool rightward = target > order_.front();
    // Relationship joining `target` to its already-bound neighbour.
    const std::size_t rel = rightward ? target - 1 : target;
    const std::size_t anchor = rightward ? target - 1 : target + 1;
    const auto& pattern = ast_.rels[rel];
    const bool forward = pattern.direction == RelDirection::kForward;
    // Edge source is nodes[rel] for forward and nodes[rel+1] for backward.
    const bool anchor_is_edge_source = forward == rightward;
    const auto candidates = anchor_is_edge_source ? graph_.out_edges(nodes_[anchor])
                                                  : graph_.in_edges(nodes_[anchor]);
    for (const EdgeId e : candidates) {
      const Edge& edge = graph_.edge(e);
      if (pattern.type && edge.type != *pattern.type) continue;
      if (edge_used(e, rel)) continue;
      const NodeId other = anchor_is_edge_source ? edge.to : edge.from;
      if (!node_matches(target, other)) continue;
      nodes_[target] = other;
      edges_[rel] = e;
      bound_[target] = true;
      extend(step + 1);
      bound_[target] = false;
    }
  }

  std::optional<PropertyValue> operand_value(const Operand& op) const {
    if (const auto* lit = std::get_if<PropertyValue>(&op)) return *lit;
    if (const auto* param = std::get_if<ParamRef>(&op)) return resolve_param(params_, param->name);
    const auto& ref = std::get<PropertyRef>(op);
    const Binding& b = bindings_.at(ref.var);
    const auto& props = b.is_node ? graph_.node(nodes_[b.position]).props
                                  : graph_.edge(edges_[b.position]).props;
    const auto it = props.find(ref.key);
    if (it == props.end()) return std::nullopt;
    return it->second;
  }

  bool where_holds() const {
    for (const auto& p : ast_.where) {
      const auto lhs = operand_value(p.lhs);
      const auto rhs = operand_value(p.rhs);
      if (!lhs || !rhs || !evaluate_comparison(*lhs, p.op, *rhs)) return false;
    }
    return true;
  }

  const QueryAst& ast_;
  const QueryParams& params_;
  const Graph& graph_;
  std::vector<ResolvedNode> resolved_;
  std::map<std::string, Binding, std::less<>> bindings_;
  std::vector<NodeId> seed_candidates_;
  std::vector<std::size_t> order_;
  std::vector<NodeId> nodes_;
  std::vector<EdgeId> edges_;
  std::vector<bool> bound_;
  std::vector<std::pair<std::vector<NodeId>, std::vector<EdgeId>>> matches_;
};

}  // namespace

std::vector<ResultRow> execute(const QueryAst& ast, const QueryParams& params,
                               const Graph& graph) {
  Matcher matcher(ast, params, graph);
  auto matches = matcher.run();

  std::sort(matches.begin(), matches.end(), [](const auto& a, const auto& b) {
    for (std::size_t i = 0; i < a.first.size(); ++i) {
      if (a.first[i] != b.first[i]) return a.first[i] < b.first[i];
      if (i < a.second.size() && a.second[i] != b.second[i]) return a.second[i] < b.second[i];
    }
    return false;
  });

  std::map<std::string, Binding, std::less<>> bindings;
  for (std::size_t i = 0; i < ast.nodes.size(); ++i) {
    if (ast.nodes[i].var) bindings.emplace(*ast.nodes[i].var, Binding{true, i});
  }
  for (std::size_t i = 0; i < ast.rels.size(); ++i) {
    if (ast.rels[i].var) bindings.emplace(*ast.rels[i].var, Binding{false, i});
  }

  std::size_t count = matches.size();
  if (ast.limit) count = std::min<std::size_t>(count, static_cast<std::size_t>(*ast.limit));

  std::vector<ResultRow> rows;
  rows.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    const auto& [nodes, edges] = matches[m];
    ResultRow row;
    row.reserve(ast.returns.size());
    for (const auto& item : ast.returns) {
      const Binding& b = bindings.at(item.var);
      if (!item.key) {
        if (b.is_node) {
          row.emplace_back(nodes[b.position]);
        } else {
          row.emplace_back(edges[b.position]);
        }
        continue;
      }
      const auto& props = b.is_node ? graph.node(nodes[b.position]).props
                                    : graph.edge(edges[b.position]).props;
      const auto it = props.find(*item.key);
      if (it == props.end()) {
        row.emplace_back(std::monostate{});
      } else {
        row.emplace_back(it->second);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> run(std::string_view text, const QueryParams& params,
                           const Graph& graph) {
  return execute(parse(text), params, graph);
}

}  // namespace fountain::query
