#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fsmguard/bitvec.hpp"

namespace fsmguard {

enum class UnaryOp { LogicalNot, BitNot, Negate };

enum class BinaryOp {
  Add,
  Sub,
  Mul,
  BitAnd,
  BitOr,
  BitXor,
  LogicalAnd,
  LogicalOr,
  Eq,
  Neq,
  Lt,
  Gt,
  Le,
  Ge,
};

class ExprNode;

// Expressions are immutable trees shared by value; copying an Expr is cheap.
using Expr = std::shared_ptr<const ExprNode>;

class ExprNode {
public:
  enum class Kind { Literal, Signal, Unary, Binary };

  Kind kind = Kind::Literal;
  BitVector literal{};   // Kind::Literal
  std::string signal;    // Kind::Signal
  UnaryOp un_op{};       // Kind::Unary
  Expr operand;          // Kind::Unary
  BinaryOp bin_op{};     // Kind::Binary
  Expr lhs, rhs;         // Kind::Binary
};

Expr make_literal(std::uint64_t value, unsigned width);
Expr make_signal(std::string id);
Expr make_unary(UnaryOp op, Expr operand);
Expr make_binary(BinaryOp op, Expr lhs, Expr rhs);

bool expr_equal(const Expr& a, const Expr& b);

// Bit width of an expression under the bit-growth rule:
//   add/sub -> max(w_l, w_r) + 1,  mul -> w_l + w_r,  bitwise -> max,
//   comparisons and logical ops -> 1, bitnot/negate keep the operand width.
// signal_widths maps every referenced signal to its declared width; an
// unknown reference throws std::out_of_range.
unsigned expr_width(const Expr& e,
                    const std::map<std::string, unsigned>& signal_widths);

// Widest add/sub/mul subexpression under the same rule, or 0 when the
// expression contains no arithmetic.
unsigned max_arith_width(const Expr& e,
                         const std::map<std::string, unsigned>& signal_widths);

// Canonical text form; reparses to a structurally equal tree.
std::string to_string(const Expr& e);

// Sorted, de-duplicated identifiers referenced by the expression.
std::vector<std::string> signals_in(const Expr& e);

bool references_any_signal(const Expr& e);

// True when the expression is the constant truth literal (a nonzero literal).
bool is_constant_true(const Expr& e);

const char* to_token(UnaryOp op);
const char* to_token(BinaryOp op);

// Operators whose chains may be written without parentheses (associative).
bool is_chainable(BinaryOp op);

}  // namespace fsmguard
