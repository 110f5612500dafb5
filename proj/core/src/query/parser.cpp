#include "fountain/query/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <map>
#include <set>

#include "fountain/error.hpp"

namespace fountain::query {

namespace {

enum class Tok {
  kEnd,
  kIdent,
  kParam,
  kString,
  kInteger,
  kFloat,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kLBrace,
  kRBrace,
  kColon,
  kComma,
  kDot,
  kDash,
  kLt,
  kGt,
  kEq,
  kNe,
  kLe,
  kGe,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string text;  // identifier / param name / decoded string / numeric spelling
};

[[noreturn]] void syntax_error(std::size_t offset, std::string_view expected,
                               std::string_view found = {}) {
  std::string message = "syntax error at offset " + std::to_string(offset) + ": expected " +
                        std::string(expected);
  if (!found.empty()) {
    message += ", found " + std::string(found);
  }
  throw Error(ErrorCode::kSyntaxError, message,
              {{"offset", offset}, {"expected", std::string(expected)}});
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_space();
      Token tok = next();
      const bool end = tok.kind == Tok::kEnd;
      tokens.push_back(std::move(tok));
      if (end) {
        return tokens;
      }
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
      ++pos_;
    }
  }

  Token simple(Tok kind, std::size_t length) {
    Token t{kind, pos_, length, std::string(text_.substr(pos_, length))};
    pos_ += length;
    return t;
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  Token next() {
    if (pos_ >= text_.size()) {
      return Token{Tok::kEnd, text_.size(), 0, {}};
    }
    const char c = text_[pos_];
    switch (c) {
      case '(': return simple(Tok::kLParen, 1);
      case ')': return simple(Tok::kRParen, 1);
      case '[': return simple(Tok::kLBracket, 1);
      case ']': return simple(Tok::kRBracket, 1);
      case '{': return simple(Tok::kLBrace, 1);
      case '}': return simple(Tok::kRBrace, 1);
      case ':': return simple(Tok::kColon, 1);
      case ',': return simple(Tok::kComma, 1);
      case '.': return simple(Tok::kDot, 1);
      case '-': return simple(Tok::kDash, 1);
      case '=': return simple(Tok::kEq, 1);
      case '<':
        if (peek(1) == '>') return simple(Tok::kNe, 2);
        if (peek(1) == '=') return simple(Tok::kLe, 2);
        return simple(Tok::kLt, 1);
      case '>':
        if (peek(1) == '=') return simple(Tok::kGe, 2);
        return simple(Tok::kGt, 1);
      case '"': return string_literal();
      case '$': {
        const std::size_t start = pos_;
        ++pos_;
        if (!ident_start(peek())) {
          syntax_error(pos_, "parameter name after '$'");
        }
        const std::size_t name_start = pos_;
        while (ident_char(peek())) ++pos_;
        return Token{Tok::kParam, start, pos_ - start,
                     std::string(text_.substr(name_start, pos_ - name_start))};
      }
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      return number();
    }
    if (ident_start(c)) {
      const std::size_t start = pos_;
      while (ident_char(peek())) ++pos_;
      return Token{Tok::kIdent, start, pos_ - start, std::string(text_.substr(start, pos_ - start))};
    }
    syntax_error(pos_, "a token", std::string("'") + c + "'");
  }

  Token number() {
    const std::size_t start = pos_;
    bool is_float = false;
    while (std::isdigit(static_cast<unsigned char>(peek())) != 0) ++pos_;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1))) != 0) {
      is_float = true;
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())) != 0) ++pos_;
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t look = 1;
      if (peek(look) == '+' || peek(look) == '-') ++look;
      if (std::isdigit(static_cast<unsigned char>(peek(look))) != 0) {
        is_float = true;
        pos_ += look;
        while (std::isdigit(static_cast<unsigned char>(peek())) != 0) ++pos_;
      }
    }
    if (ident_char(peek())) {
      syntax_error(pos_, "end of number");
    }
    return Token{is_float ? Tok::kFloat : Tok::kInteger, start, pos_ - start,
                 std::string(text_.substr(start, pos_ - start))};
  }

  Token string_literal() {
    const std::size_t start = pos_;
    ++pos_;
    std::string value;
    while (true) {
      if (pos_ >= text_.size()) {
        syntax_error(pos_, "closing '\"'");
      }
      const char c = text_[pos_];
      if (c == '"') {
        ++pos_;
        break;
      }
      if (c != '\\') {
        value.push_back(c);
        ++pos_;
        continue;
      }
      const char esc = peek(1);
      pos_ += 2;
      switch (esc) {
        case '"': value.push_back('"'); break;
        case '\\': value.push_back('\\'); break;
        case '/': value.push_back('/'); break;
        case 'n': value.push_back('\n'); break;
        case 't': value.push_back('\t'); break;
        case 'r': value.push_back('\r'); break;
        case 'b': value.push_back('\b'); break;
        case 'f': value.push_back('\f'); break;
        case 'u': {
          if (pos_ + 4 > text_.size()) {
            syntax_error(pos_, "four hex digits after \\u");
          }
          std::uint32_t cp = 0;
          const auto hex = text_.substr(pos_, 4);
          const auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + 4, cp, 16);
          if (ec != std::errc() || ptr != hex.data() + 4) {
            syntax_error(pos_, "four hex digits after \\u");
          }
          append_utf8(value, cp);
          pos_ += 4;
          break;
        }
        default:
          syntax_error(pos_ - 1, "a valid escape sequence");
      }
    }
    return Token{Tok::kString, start, pos_ - start, std::move(value)};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool keyword_is(const Token& t, std::string_view kw) {
  if (t.kind != Tok::kIdent || t.text.size() != kw.size()) {
    return false;
  }
  for (std::size_t i = 0; i < kw.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(t.text[i])) != kw[i]) {
      return false;
    }
  }
  return true;
}

bool is_reserved(const Token& t) {
  static constexpr std::string_view kReserved[] = {"MATCH", "WHERE",    "AND",  "RETURN",
                                                   "LIMIT", "CONTAINS", "TRUE", "FALSE"};
  return std::any_of(std::begin(kReserved), std::end(kReserved),
                     [&](std::string_view kw) { return keyword_is(t, kw); });
}

std::string describe(const Token& t) {
  return t.kind == Tok::kEnd ? std::string("end of input") : "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  QueryAst parse_query() {
    QueryAst ast;
    expect_keyword("MATCH");
    ast.nodes.push_back(node_pattern());
    while (peek().kind == Tok::kDash || peek().kind == Tok::kLt) {
      const std::size_t rel_offset = peek().offset;
      RelPattern rel = rel_pattern();
      if (ast.rels.size() == kMaxHops) {
        throw Error(ErrorCode::kTooManyHops,
                    "a pattern may have at most " + std::to_string(kMaxHops) + " relationships",
                    {{"offset", rel_offset}, {"max", kMaxHops}});
      }
      ast.rels.push_back(std::move(rel));
      ast.nodes.push_back(node_pattern());
    }
    if (keyword_is(peek(), "WHERE")) {
      advance();
      ast.where.push_back(predicate());
      while (keyword_is(peek(), "AND")) {
        advance();
        ast.where.push_back(predicate());
      }
    }
    expect_keyword("RETURN");
    ast.returns.push_back(return_item());
    while (peek().kind == Tok::kComma) {
      advance();
      ast.returns.push_back(return_item());
    }
    if (keyword_is(peek(), "LIMIT")) {
      advance();
      const Token& t = peek();
      if (t.kind != Tok::kInteger) {
        syntax_error(t.offset, "positive integer after LIMIT", describe(t));
      }
      const auto n = parse_integer(t, false);
      if (n <= 0) {
        syntax_error(t.offset, "positive integer after LIMIT", describe(t));
      }
      ast.limit = n;
      advance();
    }
    if (peek().kind != Tok::kEnd) {
      syntax_error(peek().offset, "end of query", describe(peek()));
    }
    check_bindings(ast);
    return ast;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      syntax_error(peek().offset, what, describe(peek()));
    }
    return advance();
  }

  void expect_keyword(std::string_view kw) {
    if (!keyword_is(peek(), kw)) {
      syntax_error(peek().offset, kw, describe(peek()));
    }
    advance();
  }

  std::string identifier(std::string_view what) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent) {
      syntax_error(t.offset, what, describe(t));
    }
    advance();
    return t.text;
  }

  std::string variable() {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || is_reserved(t)) {
      syntax_error(t.offset, "variable name", describe(t));
    }
    advance();
    return t.text;
  }

  void bind_node_var(const std::string& name, std::size_t offset) {
    if (rel_vars_.count(name) != 0) {
      syntax_error(offset, "a variable not already bound to a relationship", "'" + name + "'");
    }
    node_vars_.insert(name);
  }

  void bind_rel_var(const std::string& name, std::size_t offset) {
    if (rel_vars_.count(name) != 0 || node_vars_.count(name) != 0) {
      syntax_error(offset, "a fresh relationship variable", "'" + name + "'");
    }
    rel_vars_.insert(name);
  }

  NodePattern node_pattern() {
    NodePattern node;
    expect(Tok::kLParen, "'('");
    if (peek().kind == Tok::kIdent) {
      const std::size_t offset = peek().offset;
      node.var = variable();
      bind_node_var(*node.var, offset);
    }
    if (peek().kind == Tok::kColon) {
      advance();
      node.label = identifier("label name");
    }
    if (peek().kind == Tok::kLBrace) {
      advance();
      if (peek().kind != Tok::kRBrace) {
        node.props.push_back(property_constraint());
        while (peek().kind == Tok::kComma) {
          advance();
          node.props.push_back(property_constraint());
        }
      }
      expect(Tok::kRBrace, "',' or '}'");
    }
    expect(Tok::kRParen, node.props.empty() && !node.label ? "':', '{' or ')'"
                                                           : (node.props.empty() ? "'{' or ')'" : "')'"));
    return node;
  }

  PropertyConstraint property_constraint() {
    PropertyConstraint c;
    c.key = identifier("property key");
    expect(Tok::kColon, "':'");
    if (peek().kind == Tok::kParam) {
      c.value = ParamRef{advance().text};
    } else {
      c.value = literal();
    }
    return c;
  }

  RelPattern rel_pattern() {
    RelPattern rel;
    if (peek().kind == Tok::kLt) {
      advance();
      rel.direction = RelDirection::kBackward;
    }
    expect(Tok::kDash, "'-'");
    if (peek().kind == Tok::kLBracket) {
      advance();
      if (peek().kind == Tok::kIdent) {
        const std::size_t offset = peek().offset;
        rel.var = variable();
        bind_rel_var(*rel.var, offset);
      }
      if (peek().kind == Tok::kColon) {
        advance();
        rel.type = identifier("relationship type");
      }
      expect(Tok::kRBracket, "']'");
    }
    expect(Tok::kDash, "'-'");
    if (rel.direction == RelDirection::kForward) {
      expect(Tok::kGt, "'>' (undirected relationships are not supported)");
    } else if (peek().kind == Tok::kGt) {
      syntax_error(peek().offset, "'(' (bidirectional relationships are not supported)");
    }
    return rel;
  }

  std::int64_t parse_integer(const Token& t, bool negative) {
    std::uint64_t magnitude = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), magnitude);
    const std::uint64_t limit = negative
        ? static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + 1
        : static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || magnitude > limit) {
      syntax_error(t.offset, "integer within 64-bit range", describe(t));
    }
    if (negative) {
      return magnitude == limit ? std::numeric_limits<std::int64_t>::min()
                                : -static_cast<std::int64_t>(magnitude);
    }
    return static_cast<std::int64_t>(magnitude);
  }

  PropertyValue literal() {
    bool negative = false;
    if (peek().kind == Tok::kDash &&
        (peek(1).kind == Tok::kInteger || peek(1).kind == Tok::kFloat) &&
        peek(1).offset == peek().offset + 1) {
      negative = true;
      advance();
    }
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kString:
        if (!negative) {
          advance();
          return t.text;
        }
        break;
      case Tok::kInteger: {
        const auto v = parse_integer(t, negative);
        advance();
        return v;
      }
      case Tok::kFloat: {
        double v = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
          syntax_error(t.offset, "finite floating-point literal", describe(t));
        }
        advance();
        return negative ? -v : v;
      }
      case Tok::kIdent:
        if (!negative && keyword_is(t, "TRUE")) {
          advance();
          return true;
        }
        if (!negative && keyword_is(t, "FALSE")) {
          advance();
          return false;
        }
        break;
      default:
        break;
    }
    syntax_error(t.offset, "literal (string, number, true or false)", describe(t));
  }

  Operand operand() {
    const Token& t = peek();
    if (t.kind == Tok::kParam) {
      advance();
      return ParamRef{t.text};
    }
    if (t.kind == Tok::kIdent && !is_reserved(t)) {
      const std::size_t offset = t.offset;
      std::string var = variable();
      if (peek().kind != Tok::kDot) {
        syntax_error(peek().offset, "'.' after variable in comparison", describe(peek()));
      }
      advance();
      referenced_.emplace_back(var, offset);
      return PropertyRef{std::move(var), identifier("property key")};
    }
    return literal();
  }

  Predicate predicate() {
    Predicate p;
    p.lhs = operand();
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kEq: p.op = CompareOp::kEq; break;
      case Tok::kNe: p.op = CompareOp::kNe; break;
      case Tok::kLt: p.op = CompareOp::kLt; break;
      case Tok::kGt: p.op = CompareOp::kGt; break;
      case Tok::kLe: p.op = CompareOp::kLe; break;
      case Tok::kGe: p.op = CompareOp::kGe; break;
      default:
        if (keyword_is(t, "CONTAINS")) {
          p.op = CompareOp::kContains;
          break;
        }
        syntax_error(t.offset, "comparison operator", describe(t));
    }
    advance();
    p.rhs = operand();
    return p;
  }

  ReturnItem return_item() {
    ReturnItem item;
    const std::size_t offset = peek().offset;
    item.var = variable();
    referenced_.emplace_back(item.var, offset);
    if (peek().kind == Tok::kDot) {
      advance();
      item.key = identifier("property key");
    }
    return item;
  }

  void check_bindings(const QueryAst&) const {
    for (const auto& [name, offset] : referenced_) {
      if (node_vars_.count(name) == 0 && rel_vars_.count(name) == 0) {
        throw Error(ErrorCode::kUnboundVariable, "variable '" + name + "' is not bound in MATCH",
                    {{"name", name}, {"offset", offset}});
      }
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string> node_vars_;
  std::set<std::string> rel_vars_;
  std::vector<std::pair<std::string, std::size_t>> referenced_;
};

}  // namespace

QueryAst parse(std::string_view text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.parse_query();
}

}  // namespace fountain::query
