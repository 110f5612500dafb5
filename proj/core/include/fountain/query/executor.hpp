#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fountain/graph/graph.hpp"
#include "fountain/query/ast.hpp"

namespace fountain::query {

using QueryParams = std::map<std::string, graph::PropertyValue, std::less<>>;

// A returned cell: null (missing property), a node, a relationship, or a value.
using ResultValue =
    std::variant<std::monostate, graph::NodeId, graph::EdgeId, graph::PropertyValue>;
using ResultRow = std::vector<ResultValue>;

// Evaluates a parsed query. Matches use relationship isomorphism (an edge
// appears at most once per match, nodes may repeat) and are ordered by the
// bound ids in path order (n0, e0, n1, e1, ...) before LIMIT is applied.
// Comparisons across property kinds, or against a missing property, are false.
// Throws Error(kMissingParam) if a `$name` has no binding.
std::vector<ResultRow> execute(const QueryAst& ast, const QueryParams& params,
                               const graph::Graph& graph);

// parse + execute.
std::vector<ResultRow> run(std::string_view text, const QueryParams& params,
                           const graph::Graph& graph);

// Shared by the executor and anything else that needs the WHERE semantics.
bool evaluate_comparison(const graph::PropertyValue& lhs, CompareOp op,
                         const graph::PropertyValue& rhs);

}  // namespace fountain::query
