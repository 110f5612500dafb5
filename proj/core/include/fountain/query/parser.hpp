#pragma once

#include <string_view>

#include "fountain/query/ast.hpp"

namespace fountain::query {

// Parses the MATCH/WHERE/RETURN/LIMIT subset. Errors:
//   kSyntaxError      details {"offset": byte offset, "expected": hint}
//   kUnboundVariable  details {"name": variable}
//   kTooManyHops      more than kMaxHops relationships
QueryAst parse(std::string_view text);

}  // namespace fountain::query
