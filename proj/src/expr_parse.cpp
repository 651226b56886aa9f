#include "fsmguard/expr_parse.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "fsmguard/bitvec.hpp"
#include "fsmguard/diag.hpp"

namespace fsmguard {
namespace {

struct Token {
  enum Kind { Id, Num, Op, LParen, RParen, End } kind = End;
  std::string text;
  std::uint64_t value = 0;
  unsigned width = 1;
  int col = 0;
};

class Lexer {
 public:
  Lexer(std::string_view text, int line, int col_base)
      : text_(text), line_(line), col_base_(col_base) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) break;
      out.push_back(next());
    }
    out.push_back({Token::End, "", 0, 1, col(pos_)});
    return out;
  }

 private:
  int col(std::size_t p) const { return col_base_ + static_cast<int>(p); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw ParseError({"syntax-error", msg, line_, col(at)});
  }

  Token next() {
    const std::size_t start = pos_;
    char c = text_[pos_];
    if (c == '(') { ++pos_; return {Token::LParen, "(", 0, 1, col(start)}; }
    if (c == ')') { ++pos_; return {Token::RParen, ")", 0, 1, col(start)}; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      return {Token::Id, std::string(text_.substr(start, pos_ - start)), 0, 1, col(start)};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(start);
    static const char* two[] = {"&&", "||", "==", "!=", "<=", ">="};
    for (const char* op : two) {
      if (text_.substr(pos_, 2) == op) {
        pos_ += 2;
        return {Token::Op, op, 0, 1, col(start)};
      }
    }
    if (std::string_view("+-*&|^<>!~").find(c) != std::string_view::npos) {
      ++pos_;
      return {Token::Op, std::string(1, c), 0, 1, col(start)};
    }
    fail(std::string("unexpected character '") + c + "'", start);
  }

  Token lex_number(std::size_t start) {
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::uint64_t head = 0;
    for (std::size_t i = start; i < pos_; ++i) {
      if (head > (UINT64_MAX - (text_[i] - '0')) / 10) fail("number too large", start);
      head = head * 10 + (text_[i] - '0');
    }
    if (pos_ >= text_.size() || text_[pos_] != '\'') {
      if (head != 0 && min_width_for(head) > 64) fail("number too large", start);
      return {Token::Num, std::string(text_.substr(start, pos_ - start)), head,
              min_width_for(head), col(start)};
    }
    ++pos_;  // consume '
    if (head < 1 || head > 64)
      throw ParseError({"width-violation",
                        "literal width " + std::to_string(head) + " outside 1..64", line_,
                        col(start)});
    if (pos_ >= text_.size()) fail("truncated sized literal", start);
    char base = text_[pos_++];
    unsigned radix = 0;
    switch (base) {
      case 'b': radix = 2; break;
      case 'd': radix = 10; break;
      case 'h': radix = 16; break;
      default: fail(std::string("unknown literal base '") + base + "'", start);
    }
    const std::size_t digits_start = pos_;
    std::uint64_t value = 0;
    bool any = false;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '_') { ++pos_; continue; }
      int dv;
      if (d >= '0' && d <= '9') dv = d - '0';
      else if (d >= 'a' && d <= 'f') dv = d - 'a' + 10;
      else if (d >= 'A' && d <= 'F') dv = d - 'A' + 10;
      else break;
      if (static_cast<unsigned>(dv) >= radix) break;
      if (value > (UINT64_MAX - dv) / radix) fail("literal value too large", digits_start);
      value = value * radix + dv;
      any = true;
      ++pos_;
    }
    if (!any) fail("sized literal has no digits", digits_start);
    unsigned width = static_cast<unsigned>(head);
    if (value != 0 && min_width_for(value) > width)
      throw ParseError({"width-violation",
                        "literal value does not fit in " + std::to_string(width) + " bits",
                        line_, col(start)});
    return {Token::Num, std::string(text_.substr(start, pos_ - start)), value, width,
            col(start)};
  }

  std::string_view text_;
  int line_;
  int col_base_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, int line) : toks_(std::move(toks)), line_(line) {}

  Expr run() {
    Expr e = chain();
    if (cur().kind != Token::End)
      fail("unexpected '" + cur().text + "' after expression", cur().col);
    return e;
  }

 private:
  const Token& cur() const { return toks_[idx_]; }
  void advance() { ++idx_; }

  [[noreturn]] void fail(const std::string& msg, int col) {
    throw ParseError({"syntax-error", msg, line_, col});
  }

  static std::optional<BinaryOp> binary_op(const std::string& t) {
    if (t == "+") return BinaryOp::Add;
    if (t == "-") return BinaryOp::Sub;
    if (t == "*") return BinaryOp::Mul;
    if (t == "&") return BinaryOp::BitAnd;
    if (t == "|") return BinaryOp::BitOr;
    if (t == "^") return BinaryOp::BitXor;
    if (t == "&&") return BinaryOp::LogicalAnd;
    if (t == "||") return BinaryOp::LogicalOr;
    if (t == "==") return BinaryOp::Eq;
    if (t == "!=") return BinaryOp::Neq;
    if (t == "<") return BinaryOp::Lt;
    if (t == ">") return BinaryOp::Gt;
    if (t == "<=") return BinaryOp::Le;
    if (t == ">=") return BinaryOp::Ge;
    return std::nullopt;
  }

  Expr chain() {
    Expr acc = unary();
    if (cur().kind != Token::Op) return acc;
    auto first = binary_op(cur().text);
    if (!first) fail("expected operator, got '" + cur().text + "'", cur().col);
    advance();
    acc = make_binary(*first, acc, unary());
    while (cur().kind == Token::Op) {
      auto op = binary_op(cur().text);
      if (!op) fail("expected operator, got '" + cur().text + "'", cur().col);
      if (*op != *first)
        fail("mixing operators requires parentheses", cur().col);
      if (!is_chainable(*op))
        fail("operator '" + cur().text + "' cannot be chained; use parentheses", cur().col);
      advance();
      acc = make_binary(*op, acc, unary());
    }
    return acc;
  }

  Expr unary() {
    if (cur().kind == Token::Op) {
      const std::string t = cur().text;
      const int c = cur().col;
      if (t == "!" || t == "~" || t == "-") {
        advance();
        UnaryOp op = t == "!" ? UnaryOp::LogicalNot
                   : t == "~" ? UnaryOp::BitNot
                              : UnaryOp::Negate;
        return make_unary(op, unary());
      }
      fail("expected operand, got '" + t + "'", c);
    }
    return primary();
  }

  Expr primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Token::Num: {
        Expr e = make_literal(t.value, t.width);
        advance();
        return e;
      }
      case Token::Id: {
        Expr e = make_signal(t.text);
        advance();
        return e;
      }
      case Token::LParen: {
        advance();
        Expr e = chain();
        if (cur().kind != Token::RParen) fail("expected ')'", cur().col);
        advance();
        return e;
      }
      case Token::RParen:
        fail("unexpected ')'", t.col);
      case Token::End:
        fail("expected expression", t.col);
      default:
        fail("expected operand, got '" + t.text + "'", t.col);
    }
  }

  std::vector<Token> toks_;
  int line_;
  std::size_t idx_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, int line, int col_base) {
  Lexer lexer(text, line, col_base);
  Parser parser(lexer.run(), line);
  return parser.run();
}

}  // namespace fsmguard
