#include "fountain/query/ast.hpp"

#include <charconv>
#include <cstdio>

namespace fountain::query {

namespace {

std::string render_string(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
  return out;
}

std::string render_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string out(buf, ptr);
  if (out.find_first_of(".e") == std::string::npos) {
    out += ".0";
  }
  return out;
}

std::string render_operand(const Operand& op) {
  if (const auto* lit = std::get_if<PropertyValue>(&op)) {
    return render_literal(*lit);
  }
  if (const auto* param = std::get_if<ParamRef>(&op)) {
    return "$" + param->name;
  }
  const auto& ref = std::get<PropertyRef>(op);
  return ref.var + "." + ref.key;
}

std::string_view render_op(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "<>";
    case CompareOp::kLt: return "<";
    case CompareOp::kGt: return ">";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGe: return ">=";
    case CompareOp::kContains: return "CONTAINS";
  }
  return "=";
}

std::string render_node(const NodePattern& node) {
  std::string out = "(";
  if (node.var) out += *node.var;
  if (node.label) out += ":" + *node.label;
  if (!node.props.empty()) {
    if (node.var || node.label) out += " ";
    out += "{";
    for (std::size_t i = 0; i < node.props.size(); ++i) {
      if (i > 0) out += ", ";
      out += node.props[i].key + ": ";
      if (const auto* param = std::get_if<ParamRef>(&node.props[i].value)) {
        out += "$" + param->name;
      } else {
        out += render_literal(std::get<PropertyValue>(node.props[i].value));
      }
    }
    out += "}";
  }
  out += ")";
  return out;
}

std::string render_rel(const RelPattern& rel) {
  std::string inner = "[";
  if (rel.var) inner += *rel.var;
  if (rel.type) inner += ":" + *rel.type;
  inner += "]";
  return rel.direction == RelDirection::kForward ? "-" + inner + "->" : "<-" + inner + "-";
}

}  // namespace

std::string render_literal(const PropertyValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return render_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return render_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      value);
}

std::string render(const QueryAst& ast) {
  std::string out = "MATCH ";
  for (std::size_t i = 0; i < ast.nodes.size(); ++i) {
    if (i > 0) out += render_rel(ast.rels[i - 1]);
    out += render_node(ast.nodes[i]);
  }
  for (std::size_t i = 0; i < ast.where.size(); ++i) {
    out += i == 0 ? " WHERE " : " AND ";
    const auto& p = ast.where[i];
    out += render_operand(p.lhs);
    out += " ";
    out += render_op(p.op);
    out += " ";
    out += render_operand(p.rhs);
  }
  out += " RETURN ";
  for (std::size_t i = 0; i < ast.returns.size(); ++i) {
    if (i > 0) out += ", ";
    out += ast.returns[i].var;
    if (ast.returns[i].key) out += "." + *ast.returns[i].key;
  }
  if (ast.limit) {
    out += " LIMIT " + std::to_string(*ast.limit);
  }
  return out;
}

}  // namespace fountain::query
