#include "query_oracle.hpp"

#include <algorithm>
#include <map>

namespace fountain::testing {

using graph::Graph;
using graph::NodeId;
using graph::EdgeId;
using graph::PropertyValue;
using query::CompareOp;
using query::QueryAst;

namespace {

bool same_value(const PropertyValue& a, const PropertyValue& b) {
  return a.index() == b.index() && a == b;
}

// -1, 0, 1, or 2 when the kinds differ.
int order(const PropertyValue& a, const PropertyValue& b) {
  if (a.index() != b.index()) return 2;
  if (a == b) return 0;
  return a < b ? -1 : 1;
}

bool compare(const PropertyValue& a, CompareOp op, const PropertyValue& b) {
  if (op == CompareOp::kContains) {
    if (a.index() != 0 || b.index() != 0) return false;
    return std::get<std::string>(a).find(std::get<std::string>(b)) != std::string::npos;
  }
  const int o = order(a, b);
  if (o == 2) return false;
  switch (op) {
    case CompareOp::kEq: return o == 0;
    case CompareOp::kNe: return o != 0;
    case CompareOp::kLt: return o < 0;
    case CompareOp::kGt: return o > 0;
    case CompareOp::kLe: return o <= 0;
    case CompareOp::kGe: return o >= 0;
    case CompareOp::kContains: return false;
  }
  return false;
}

const PropertyValue& param(const query::QueryParams& params, const std::string& name) {
  return params.at(name);
}

struct Path {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
};

class Oracle {
 public:
  Oracle(const QueryAst& ast, const query::QueryParams& params, const Graph& graph)
      : ast_(ast), params_(params), graph_(graph) {}

  std::vector<Path> all() {
    std::vector<Path> out;
    for (const auto& n : graph_.nodes()) {
      Path p;
      p.nodes.push_back(n.id);
      extend(p, out);
    }
    return out;
  }

  std::optional<PropertyValue> lookup(const Path& p, const std::string& var, const std::string& key) const {
    const graph::PropertyMap* props = nullptr;
    for (std::size_t i = 0; i < ast_.nodes.size() && props == nullptr; ++i) {
      if (ast_.nodes[i].var == var) props = &graph_.node(p.nodes[i]).props;
    }
    for (std::size_t i = 0; i < ast_.rels.size() && props == nullptr; ++i) {
      if (ast_.rels[i].var == var) props = &graph_.edge(p.edges[i]).props;
    }
    const auto it = props->find(key);
    if (it == props->end()) return std::nullopt;
    return it->second;
  }

 private:
  void extend(Path& p, std::vector<Path>& out) {
    const std::size_t depth = p.edges.size();
    if (depth == ast_.rels.size()) {
      if (accepts(p)) out.push_back(p);
      return;
    }
    const NodeId here = p.nodes.back();
    const bool forward = ast_.rels[depth].direction == query::RelDirection::kForward;
    for (const auto& e : graph_.edges()) {
      if ((forward ? e.from : e.to) != here) continue;
      p.edges.push_back(e.id);
      p.nodes.push_back(forward ? e.to : e.from);
      extend(p, out);
      p.edges.pop_back();
      p.nodes.pop_back();
    }
  }

  bool accepts(const Path& p) const {
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      for (std::size_t j = i + 1; j < p.edges.size(); ++j) {
        if (p.edges[i] == p.edges[j]) return false;
      }
      const auto& rel = ast_.rels[i];
      if (rel.type && graph_.edge(p.edges[i]).type != *rel.type) return false;
    }
    std::map<std::string, NodeId> seen;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      const auto& pat = ast_.nodes[i];
      const auto& node = graph_.node(p.nodes[i]);
      if (pat.label && !node.has_label(*pat.label)) return false;
      for (const auto& c : pat.props) {
        const PropertyValue want = std::holds_alternative<PropertyValue>(c.value)
                                       ? std::get<PropertyValue>(c.value)
                                       : param(params_, std::get<query::ParamRef>(c.value).name);
        const auto it = node.props.find(c.key);
        if (it == node.props.end() || !same_value(it->second, want)) return false;
      }
      if (pat.var) {
        const auto [it, fresh] = seen.emplace(*pat.var, p.nodes[i]);
        if (!fresh && it->second != p.nodes[i]) return false;
      }
    }
    for (const auto& pred : ast_.where) {
      const auto l = operand(p, pred.lhs);
      const auto r = operand(p, pred.rhs);
      if (!l || !r || !compare(*l, pred.op, *r)) return false;
    }
    return true;
  }

  std::optional<PropertyValue> operand(const Path& p, const query::Operand& op) const {
    if (const auto* lit = std::get_if<PropertyValue>(&op)) return *lit;
    if (const auto* pr = std::get_if<query::ParamRef>(&op)) return param(params_, pr->name);
    const auto& ref = std::get<query::PropertyRef>(op);
    return lookup(p, ref.var, ref.key);
  }

  const QueryAst& ast_;
  const query::QueryParams& params_;
  const Graph& graph_;
};

}  // namespace

std::vector<query::ResultRow> brute_force_query(const QueryAst& ast, const query::QueryParams& params,
                                                const Graph& graph) {
  Oracle oracle(ast, params, graph);
  auto paths = oracle.all();
  const auto key = [](const Path& p) {
    std::vector<std::uint64_t> k;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      k.push_back(p.nodes[i].value);
      if (i < p.edges.size()) k.push_back(p.edges[i].value);
    }
    return k;
  };
  std::sort(paths.begin(), paths.end(), [&](const Path& a, const Path& b) { return key(a) < key(b); });
  if (ast.limit && paths.size() > static_cast<std::size_t>(*ast.limit)) paths.resize(*ast.limit);

  std::vector<query::ResultRow> rows;
  for (const auto& p : paths) {
    query::ResultRow row;
    for (const auto& item : ast.returns) {
      if (item.key) {
        const auto v = oracle.lookup(p, item.var, *item.key);
        if (v) {
          row.emplace_back(*v);
        } else {
          row.emplace_back(std::monostate{});
        }
        continue;
      }
      bool done = false;
      for (std::size_t i = 0; i < ast.nodes.size() && !done; ++i) {
        if (ast.nodes[i].var == item.var) {
          row.emplace_back(p.nodes[i]);
          done = true;
        }
      }
      for (std::size_t i = 0; i < ast.rels.size() && !done; ++i) {
        if (ast.rels[i].var == item.var) {
          row.emplace_back(p.edges[i]);
          done = true;
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

const std::vector<std::string> kNames = {"alpha", "beta", "gamma", "a'b", "x\"y", ""};
const std::vector<std::string> kLabels = {"A", "B", "C"};
const std::vector<std::string> kTypes = {"R", "S", "T"};
const std::vector<double> kDoubles = {-1.5, 0.0, 0.5, 2.0, 3.25};

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

PropertyValue random_value(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: return pick(rng, kNames);
    case 1: return pick(rng, kDoubles);
    case 2: return std::int64_t{std::uniform_int_distribution<int>(-2, 4)(rng)};
    default: return chance(rng, 0.5);
  }
}

graph::PropertyMap random_props(std::mt19937_64& rng) {
  graph::PropertyMap props;
  if (chance(rng, 0.8)) props["name"] = pick(rng, kNames);
  if (chance(rng, 0.7)) props["n"] = std::int64_t{std::uniform_int_distribution<int>(-2, 4)(rng)};
  if (chance(rng, 0.4)) props["x"] = pick(rng, kDoubles);
  if (chance(rng, 0.3)) props["flag"] = chance(rng, 0.5);
  // Occasionally store a value under a key of an unexpected kind.
  if (chance(rng, 0.1)) props["n"] = random_value(rng);
  return props;
}

}  // namespace

Graph random_graph(std::mt19937_64& rng, std::size_t max_nodes, std::size_t max_edges) {
  Graph g;
  const auto n = std::uniform_int_distribution<std::size_t>(1, max_nodes)(rng);
  for (std::size_t i = 0; i < n; ++i) {
    graph::LabelSet labels;
    for (const auto& l : kLabels) {
      if (chance(rng, 0.4)) labels.insert(l);
    }
    if (labels.empty()) labels.insert(pick(rng, kLabels));
    g.create_node(std::move(labels), random_props(rng));
  }
  const auto m = std::uniform_int_distribution<std::size_t>(0, max_edges)(rng);
  std::uniform_int_distribution<std::uint64_t> node(0, n - 1);
  for (std::size_t i = 0; i < m; ++i) {
    g.create_edge(pick(rng, kTypes), NodeId{node(rng)}, NodeId{node(rng)}, random_props(rng));
  }
  return g;
}

RandomQuery random_query(std::mt19937_64& rng) {
  RandomQuery q;
  auto& ast = q.ast;
  const auto hops = std::uniform_int_distribution<std::size_t>(0, query::kMaxHops)(rng);
  std::vector<std::string> node_vars;
  std::vector<std::string> rel_vars;
  std::size_t param_count = 0;
  const auto new_param = [&](PropertyValue v) {
    const std::string name = "p" + std::to_string(param_count++);
    q.params[name] = std::move(v);
    return query::ParamRef{name};
  };

  for (std::size_t i = 0; i <= hops; ++i) {
    query::NodePattern np;
    if (!node_vars.empty() && chance(rng, 0.1)) {
      np.var = pick(rng, node_vars);
    } else if (chance(rng, 0.75)) {
      np.var = "n" + std::to_string(i);
      node_vars.push_back(*np.var);
    }
    if (chance(rng, 0.45)) np.label = chance(rng, 0.1) ? "Missing" : pick(rng, kLabels);
    if (chance(rng, 0.25)) {
      query::PropertyConstraint c;
      c.key = chance(rng, 0.6) ? "name" : "n";
      const PropertyValue v = c.key == "name" ? PropertyValue{pick(rng, kNames)}
                                              : PropertyValue{std::int64_t{std::uniform_int_distribution<int>(-2, 4)(rng)}};
      if (chance(rng, 0.4)) {
        c.value = new_param(v);
      } else {
        c.value = v;
      }
      np.props.push_back(std::move(c));
    }
    ast.nodes.push_back(std::move(np));
    if (i == hops) break;
    query::RelPattern rp;
    if (chance(rng, 0.5)) {
      rp.var = "r" + std::to_string(i);
      rel_vars.push_back(*rp.var);
    }
    if (chance(rng, 0.6)) rp.type = pick(rng, kTypes);
    rp.direction = chance(rng, 0.5) ? query::RelDirection::kForward : query::RelDirection::kBackward;
    ast.rels.push_back(std::move(rp));
  }

  std::vector<std::string> bound = node_vars;
  bound.insert(bound.end(), rel_vars.begin(), rel_vars.end());
  if (bound.empty()) {
    ast.nodes.front().var = "n0";
    bound.push_back("n0");
  }
  static const std::vector<std::string> kKeys = {"name", "n", "x", "flag", "missing"};
  static const std::vector<CompareOp> kOps = {CompareOp::kEq, CompareOp::kNe, CompareOp::kLt, CompareOp::kGt,
                                              CompareOp::kLe, CompareOp::kGe, CompareOp::kContains};
  const auto preds = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < preds; ++i) {
    query::Predicate p;
    p.lhs = query::PropertyRef{pick(rng, bound), pick(rng, kKeys)};
    p.op = pick(rng, kOps);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: p.rhs = random_value(rng); break;
      case 1: p.rhs = new_param(random_value(rng)); break;
      default: p.rhs = query::PropertyRef{pick(rng, bound), pick(rng, kKeys)}; break;
    }
    if (chance(rng, 0.2)) std::swap(p.lhs, p.rhs);
    ast.where.push_back(std::move(p));
  }
  const auto items = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int i = 0; i < items; ++i) {
    query::ReturnItem item{pick(rng, bound), std::nullopt};
    if (chance(rng, 0.5)) item.key = pick(rng, kKeys);
    ast.returns.push_back(std::move(item));
  }
  if (chance(rng, 0.3)) ast.limit = std::uniform_int_distribution<std::int64_t>(1, 10)(rng);
  return q;
}

}  // namespace fountain::testing
