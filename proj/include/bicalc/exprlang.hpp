#pragma once

// Tokenizer, recursive-descent parser and evaluator for real-valued
// expressions in variables x1..xn. Grammar:
//
//   expr    := term { ("+"|"-") term }
//   term    := factor { ("*"|"/") factor }
//   factor  := unary [ "^" factor ]            (^ right-associative)
//   unary   := "-" unary | primary
//   primary := NUMBER | IDENT | IDENT "(" expr {"," expr} ")"
//            | "(" expr ")" | cond
//   cond    := "if" "(" expr CMP expr "," expr "," expr ")"
//   CMP     := "<" | "<=" | ">" | ">=" | "=="
//
// Comparisons exist only inside if(); there is no boolean type.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "bicalc/core.hpp"

namespace bicalc::expr {

struct ParseError {
  std::size_t position = 0;
  std::string expected;
  std::string found;

  std::string message() const {
    return "parse error at offset " + std::to_string(position) + ": expected " +
           expected + ", found " + found;
  }
};

class ParseException : public std::runtime_error {
 public:
  explicit ParseException(ParseError e)
      : std::runtime_error(e.message()), error_(std::move(e)) {}
  const ParseError& error() const { return error_; }

 private:
  ParseError error_;
};

enum class TokenKind { Number, Identifier, Operator, LParen, RParen, Comma, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t position = 0;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  while (i < n) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      ++i;
      while (i < n && (std::isdigit(static_cast<unsigned char>(src[i])) ||
                       src[i] == '.'))
        ++i;
      if (i < n && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      out.push_back({TokenKind::Number, std::string(src.substr(start, i - start)),
                     start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      ++i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                       src[i] == '_'))
        ++i;
      out.push_back({TokenKind::Identifier,
                     std::string(src.substr(start, i - start)), start});
      continue;
    }
    switch (c) {
      case '(':
        out.push_back({TokenKind::LParen, "(", start});
        ++i;
        break;
      case ')':
        out.push_back({TokenKind::RParen, ")", start});
        ++i;
        break;
      case ',':
        out.push_back({TokenKind::Comma, ",", start});
        ++i;
        break;
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
        out.push_back({TokenKind::Operator, std::string(1, c), start});
        ++i;
        break;
      case '<':
      case '>':
      case '=': {
        std::string t(1, c);
        ++i;
        if (i < n && src[i] == '=') {
          t += '=';
          ++i;
        }
        if (t == "=")
          throw ParseException({start, "'==' or another operator", "'='"});
        out.push_back({TokenKind::Operator, t, start});
        break;
      }
      default:
        throw ParseException(
            {start, "a token", "'" + std::string(1, c) + "'"});
    }
  }
  out.push_back({TokenKind::End, "<end>", n});
  return out;
}

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Comparison { Lt, Le, Gt, Ge, Eq };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Number, Var, Neg, Binary, Call, Cond } kind;
  double number = 0.0;
  int var_index = 0;  // 1-based
  BinaryOp op = BinaryOp::Add;
  Comparison cmp = Comparison::Lt;
  std::string call_name;
  std::vector<NodePtr> children;
};

/// Parsed expression with the arity it was parsed against.
struct Ast {
  NodePtr root;
  int arity = 0;
};

namespace detail {

struct Builtin {
  const char* name;
  int args;
};

inline constexpr Builtin kBuiltins[] = {
    {"sin", 1}, {"cos", 1}, {"tan", 1}, {"atan", 1}, {"exp", 1},  {"ln", 1},
    {"sqrt", 1}, {"abs", 1}, {"min", 2}, {"max", 2},  {"pow", 2},
};

inline const Builtin* find_builtin(const std::string& name) {
  for (const auto& b : kBuiltins)
    if (name == b.name) return &b;
  return nullptr;
}

// x/y/u/v are positional aliases matching the paper's notation.
inline int variable_index(const std::string& name, int arity) {
  if (name == "x" || name == "u") return 1;
  if (name == "y" || name == "v") return arity >= 2 ? 2 : 0;
  if (name.size() >= 2 && name[0] == 'x') {
    int idx = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return 0;
      idx = idx * 10 + (name[i] - '0');
      if (idx > 1000) return 0;
    }
    return idx;
  }
  return 0;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, int arity)
      : tokens_(std::move(tokens)), arity_(arity) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    expect_end();
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseException({peek().position, expected, "'" + peek().text + "'"});
  }

  void expect_end() {
    if (peek().kind != TokenKind::End) fail("end of input");
  }

  bool accept_op(const char* text) {
    if (peek().kind == TokenKind::Operator && peek().text == text) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(TokenKind k, const char* what) {
    if (peek().kind != k) fail(what);
    ++pos_;
  }

  NodePtr parse_expr() {
    NodePtr left = parse_term();
    for (;;) {
      if (accept_op("+"))
        left = binary(BinaryOp::Add, left, parse_term());
      else if (accept_op("-"))
        left = binary(BinaryOp::Sub, left, parse_term());
      else
        return left;
    }
  }

  NodePtr parse_term() {
    NodePtr left = parse_factor();
    for (;;) {
      if (accept_op("*"))
        left = binary(BinaryOp::Mul, left, parse_factor());
      else if (accept_op("/"))
        left = binary(BinaryOp::Div, left, parse_factor());
      else
        return left;
    }
  }

  // unary minus binds looser than ^: -x^2 is -(x^2)
  NodePtr parse_factor() {
    if (accept_op("-")) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Neg;
      n->children.push_back(parse_factor());
      return n;
    }
    NodePtr base = parse_unary();
    if (accept_op("^")) return binary(BinaryOp::Pow, base, parse_factor());
    return base;
  }

  NodePtr parse_unary() {
    if (accept_op("-")) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Neg;
      n->children.push_back(parse_unary());
      return n;
    }
    return parse_primary();
  }

  NodePtr parse_primary() {
    const Token& t = peek();
    if (t.kind == TokenKind::Number) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Number;
      n->number = std::stod(take().text);
      return n;
    }
    if (t.kind == TokenKind::Identifier) {
      if (t.text == "if") return parse_cond();
      Token id = take();
      if (peek().kind == TokenKind::LParen) {
        const Builtin* b = find_builtin(id.text);
        if (!b)
          throw ParseException(
              {id.position, "a built-in function name", "'" + id.text + "'"});
        ++pos_;
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Call;
        n->call_name = id.text;
        n->children.push_back(parse_expr());
        while (peek().kind == TokenKind::Comma) {
          ++pos_;
          n->children.push_back(parse_expr());
        }
        expect(TokenKind::RParen, "')'");
        if (static_cast<int>(n->children.size()) != b->args)
          throw ParseException({id.position,
                                std::string(b->name) + " with " +
                                    std::to_string(b->args) + " argument(s)",
                                std::to_string(n->children.size()) +
                                    " argument(s)"});
        return n;
      }
      if (id.text == "pi" || id.text == "e") {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Number;
        n->number = id.text == "pi" ? 3.14159265358979323846 : 2.71828182845904523536;
        return n;
      }
      const int idx = variable_index(id.text, arity_);
      if (idx < 1 || idx > arity_)
        throw ParseException({id.position,
                              "a variable x1..x" + std::to_string(arity_),
                              "'" + id.text + "'"});
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Var;
      n->var_index = idx;
      return n;
    }
    if (t.kind == TokenKind::LParen) {
      ++pos_;
      NodePtr e = parse_expr();
      expect(TokenKind::RParen, "')'");
      return e;
    }
    fail("a number, variable, function call or '('");
  }

  NodePtr parse_cond() {
    Token kw = take();  // "if"
    (void)kw;
    expect(TokenKind::LParen, "'('");
    NodePtr lhs = parse_expr();
    Comparison cmp;
    if (accept_op("<="))
      cmp = Comparison::Le;
    else if (accept_op("<"))
      cmp = Comparison::Lt;
    else if (accept_op(">="))
      cmp = Comparison::Ge;
    else if (accept_op(">"))
      cmp = Comparison::Gt;
    else if (accept_op("=="))
      cmp = Comparison::Eq;
    else
      fail("a comparison operator");
    NodePtr rhs = parse_expr();
    expect(TokenKind::Comma, "','");
    NodePtr then_branch = parse_expr();
    expect(TokenKind::Comma, "','");
    NodePtr else_branch = parse_expr();
    expect(TokenKind::RParen, "')'");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Cond;
    n->cmp = cmp;
    n->children = {lhs, rhs, then_branch, else_branch};
    return n;
  }

  static NodePtr binary(BinaryOp op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->children = {std::move(l), std::move(r)};
    return n;
  }

  std::vector<Token> tokens_;
  int arity_;
  std::size_t pos_ = 0;
};

struct EvalFailure {
  const char* msg;
};

// Integer exponents keep negative bases legal and stay fast on the
// hot paths (Riemann sums evaluate the AST millions of times).
inline double eval_pow(double base, double exponent) {
  if (base == 0.0 && exponent == 0.0) return 1.0;
  double ip;
  if (std::modf(exponent, &ip) == 0.0 && std::abs(exponent) <= 64.0) {
    long e = static_cast<long>(exponent);
    double b = base;
    if (e < 0) {
      if (b == 0.0) throw EvalFailure{"0 raised to negative power"};
      b = 1.0 / b;
      e = -e;
    }
    double r = 1.0;
    while (e > 0) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }
  if (base < 0.0) throw EvalFailure{"negative base with non-integer exponent"};
  return std::pow(base, exponent);
}

inline double eval_node(const Node& n, const double* x) {
  switch (n.kind) {
    case Node::Kind::Number:
      return n.number;
    case Node::Kind::Var:
      return x[n.var_index - 1];
    case Node::Kind::Neg:
      return -eval_node(*n.children[0], x);
    case Node::Kind::Binary: {
      const double l = eval_node(*n.children[0], x);
      const double r = eval_node(*n.children[1], x);
      double out;
      switch (n.op) {
        case BinaryOp::Add: out = l + r; break;
        case BinaryOp::Sub: out = l - r; break;
        case BinaryOp::Mul: out = l * r; break;
        case BinaryOp::Div:
          if (r == 0.0) throw EvalFailure{"division by zero"};
          out = l / r;
          break;
        case BinaryOp::Pow: out = eval_pow(l, r); break;
        default: throw EvalFailure{"bad binary op"};
      }
      if (!std::isfinite(out)) throw EvalFailure{"non-finite intermediate"};
      return out;
    }
    case Node::Kind::Call: {
      const double a = eval_node(*n.children[0], x);
      const char c0 = n.call_name[0];
      double out;
      switch (c0) {
        case 's':
          if (n.call_name[1] == 'i') {
            out = std::sin(a);
          } else {
            if (a < 0.0) throw EvalFailure{"sqrt of negative"};
            out = std::sqrt(a);
          }
          break;
        case 'c': out = std::cos(a); break;
        case 't': out = std::tan(a); break;
        case 'a': out = n.call_name[1] == 't' ? std::atan(a) : std::abs(a); break;
        case 'e': out = std::exp(a); break;
        case 'l':
          if (a <= 0.0) throw EvalFailure{"ln of non-positive"};
          out = std::log(a);
          break;
        case 'm': {
          const double b = eval_node(*n.children[1], x);
          out = n.call_name[1] == 'i' ? std::min(a, b) : std::max(a, b);
          break;
        }
        case 'p': {
          const double b = eval_node(*n.children[1], x);
          out = eval_pow(a, b);
          break;
        }
        default: throw EvalFailure{"unknown function"};
      }
      if (!std::isfinite(out)) throw EvalFailure{"non-finite intermediate"};
      return out;
    }
    case Node::Kind::Cond: {
      const double l = eval_node(*n.children[0], x);
      const double r = eval_node(*n.children[1], x);
      bool taken;
      switch (n.cmp) {
        case Comparison::Lt: taken = l < r; break;
        case Comparison::Le: taken = l <= r; break;
        case Comparison::Gt: taken = l > r; break;
        case Comparison::Ge: taken = l >= r; break;
        case Comparison::Eq: taken = l == r; break;
        default: throw EvalFailure{"bad comparison"};
      }
      return eval_node(taken ? *n.children[2] : *n.children[3], x);
    }
  }
  throw EvalFailure{"bad node"};
}

inline void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Number: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", n.number);
      out += buf;
      return;
    }
    case Node::Kind::Var:
      out += "x" + std::to_string(n.var_index);
      return;
    case Node::Kind::Neg:
      out += "(-";
      print_node(*n.children[0], out);
      out += ")";
      return;
    case Node::Kind::Binary: {
      out += "(";
      print_node(*n.children[0], out);
      switch (n.op) {
        case BinaryOp::Add: out += "+"; break;
        case BinaryOp::Sub: out += "-"; break;
        case BinaryOp::Mul: out += "*"; break;
        case BinaryOp::Div: out += "/"; break;
        case BinaryOp::Pow: out += "^"; break;
      }
      print_node(*n.children[1], out);
      out += ")";
      return;
    }
    case Node::Kind::Call: {
      out += n.call_name;
      out += "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ",";
        print_node(*n.children[i], out);
      }
      out += ")";
      return;
    }
    case Node::Kind::Cond: {
      out += "if(";
      print_node(*n.children[0], out);
      switch (n.cmp) {
        case Comparison::Lt: out += "<"; break;
        case Comparison::Le: out += "<="; break;
        case Comparison::Gt: out += ">"; break;
        case Comparison::Ge: out += ">="; break;
        case Comparison::Eq: out += "=="; break;
      }
      print_node(*n.children[1], out);
      out += ",";
      print_node(*n.children[2], out);
      out += ",";
      print_node(*n.children[3], out);
      out += ")";
      return;
    }
  }
}

inline bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Node::Kind::Number: return a.number == b.number;
    case Node::Kind::Var: return a.var_index == b.var_index;
    case Node::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    case Node::Kind::Call:
      if (a.call_name != b.call_name) return false;
      break;
    case Node::Kind::Cond:
      if (a.cmp != b.cmp) return false;
      break;
    default: break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!equal_nodes(*a.children[i], *b.children[i])) return false;
  return true;
}

}  // namespace detail

/// Throws ParseException on any lexical or syntactic violation.
inline Ast parse(std::string_view src, int arity) {
  if (arity < 1) throw UsageError("parse: arity must be >= 1");
  detail::Parser p(tokenize(src), arity);
  return Ast{p.parse_all(), arity};
}

inline EvalOutcome evaluate(const Ast& ast, const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != ast.arity)
    throw UsageError("evaluate: point size does not match arity");
  try {
    return EvalOutcome::ok(detail::eval_node(*ast.root, point.data()));
  } catch (const detail::EvalFailure& f) {
    return EvalOutcome::fail(f.msg);
  }
}

inline std::string to_string(const Ast& ast) {
  std::string out;
  detail::print_node(*ast.root, out);
  return out;
}

inline bool structurally_equal(const Ast& a, const Ast& b) {
  return detail::equal_nodes(*a.root, *b.root);
}

/// Two-variable field backed by a parsed expression.
inline ScalarField2 field2(std::string_view src,
                           std::optional<Interval2> hint = std::nullopt) {
  Ast ast = parse(src, 2);
  return ScalarField2(
      [ast](Point2 p) -> EvalOutcome {
        const double x[2] = {p.x1, p.x2};
        try {
          return EvalOutcome::ok(detail::eval_node(*ast.root, x));
        } catch (const detail::EvalFailure& f) {
          return EvalOutcome::fail(f.msg);
        }
      },
      std::move(hint));
}

inline ScalarFieldN fieldn(std::string_view src, int arity) {
  Ast ast = parse(src, arity);
  return ScalarFieldN(
      arity, [ast, arity](const std::vector<double>& x) -> EvalOutcome {
        if (static_cast<int>(x.size()) != arity)
          return EvalOutcome::fail("arity mismatch");
        try {
          return EvalOutcome::ok(detail::eval_node(*ast.root, x.data()));
        } catch (const detail::EvalFailure& f) {
          return EvalOutcome::fail(f.msg);
        }
      });
}

}  // namespace bicalc::expr
