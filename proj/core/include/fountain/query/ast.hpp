#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fountain/graph/property.hpp"

namespace fountain::query {

using graph::PropertyValue;

struct ParamRef {
  std::string name;
  bool operator==(const ParamRef&) const = default;
};

struct PropertyRef {
  std::string var;
  std::string key;
  bool operator==(const PropertyRef&) const = default;
};

// Value inside a node pattern's property map: a literal or `$param`.
using PatternValue = std::variant<PropertyValue, ParamRef>;
// Either side of a WHERE comparison.
using Operand = std::variant<PropertyValue, ParamRef, PropertyRef>;

struct PropertyConstraint {
  std::string key;
  PatternValue value;
  bool operator==(const PropertyConstraint&) const = default;
};

struct NodePattern {
  std::optional<std::string> var;
  std::optional<std::string> label;
  std::vector<PropertyConstraint> props;
  bool operator==(const NodePattern&) const = default;
};

// kForward is `-[...]->`, kBackward is `<-[...]-`.
enum class RelDirection { kForward, kBackward };

struct RelPattern {
  std::optional<std::string> var;
  std::optional<std::string> type;
  RelDirection direction = RelDirection::kForward;
  bool operator==(const RelPattern&) const = default;
};

enum class CompareOp { kEq, kNe, kLt, kGt, kLe, kGe, kContains };

struct Predicate {
  Operand lhs;
  CompareOp op = CompareOp::kEq;
  Operand rhs;
  bool operator==(const Predicate&) const = default;
};

struct ReturnItem {
  std::string var;
  std::optional<std::string> key;
  bool operator==(const ReturnItem&) const = default;
};

inline constexpr std::size_t kMaxHops = 4;

// MATCH <path> [WHERE p AND ...] RETURN items [LIMIT n]
// nodes.size() == rels.size() + 1; rels[i] joins nodes[i] and nodes[i+1].
struct QueryAst {
  std::vector<NodePattern> nodes;
  std::vector<RelPattern> rels;
  std::vector<Predicate> where;
  std::vector<ReturnItem> returns;
  std::optional<std::int64_t> limit;
  bool operator==(const QueryAst&) const = default;
};

// Canonical text form; parse(render(ast)) == ast.
std::string render(const QueryAst& ast);
std::string render_literal(const PropertyValue& value);

}  // namespace fountain::query
