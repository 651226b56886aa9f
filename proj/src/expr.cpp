#include "fsmguard/expr.hpp"

#include <algorithm>
#include <stdexcept>

namespace fsmguard {

Expr make_literal(std::uint64_t value, unsigned width) {
  auto node = std::make_shared<ExprNode>();
  node->kind = ExprNode::Kind::Literal;
  node->literal = BitVector{value, width};
  return node;
}

Expr make_signal(std::string id) {
  auto node = std::make_shared<ExprNode>();
  node->kind = ExprNode::Kind::Signal;
  node->signal = std::move(id);
  return node;
}

Expr make_unary(UnaryOp op, Expr operand) {
  auto node = std::make_shared<ExprNode>();
  node->kind = ExprNode::Kind::Unary;
  node->un_op = op;
  node->operand = std::move(operand);
  return node;
}

Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<ExprNode>();
  node->kind = ExprNode::Kind::Binary;
  node->bin_op = op;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a == b) {
    return true;
  }
  if (!a || !b || a->kind != b->kind) {
    return false;
  }
  switch (a->kind) {
    case ExprNode::Kind::Literal:
      return a->literal == b->literal;
    case ExprNode::Kind::Signal:
      return a->signal == b->signal;
    case ExprNode::Kind::Unary:
      return a->un_op == b->un_op && expr_equal(a->operand, b->operand);
    case ExprNode::Kind::Binary:
      return a->bin_op == b->bin_op && expr_equal(a->lhs, b->lhs) &&
             expr_equal(a->rhs, b->rhs);
  }
  return false;
}

unsigned expr_width(const Expr& e,
                    const std::map<std::string, unsigned>& signal_widths) {
  switch (e->kind) {
    case ExprNode::Kind::Literal:
      return e->literal.width;
    case ExprNode::Kind::Signal: {
      auto it = signal_widths.find(e->signal);
      if (it == signal_widths.end()) {
        throw std::out_of_range("unknown signal: " + e->signal);
      }
      return it->second;
    }
    case ExprNode::Kind::Unary: {
      unsigned w = expr_width(e->operand, signal_widths);
      return e->un_op == UnaryOp::LogicalNot ? 1u : w;
    }
    case ExprNode::Kind::Binary: {
      unsigned wl = expr_width(e->lhs, signal_widths);
      unsigned wr = expr_width(e->rhs, signal_widths);
      switch (e->bin_op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return std::max(wl, wr) + 1;
        case BinaryOp::Mul:
          return wl + wr;
        case BinaryOp::BitAnd:
        case BinaryOp::BitOr:
        case BinaryOp::BitXor:
          return std::max(wl, wr);
        default:
          return 1;  // comparisons and logical connectives
      }
    }
  }
  return 1;
}

unsigned max_arith_width(const Expr& e,
                         const std::map<std::string, unsigned>& signal_widths) {
  switch (e->kind) {
    case ExprNode::Kind::Literal:
    case ExprNode::Kind::Signal:
      return 0;
    case ExprNode::Kind::Unary:
      return max_arith_width(e->operand, signal_widths);
    case ExprNode::Kind::Binary: {
      unsigned best = std::max(max_arith_width(e->lhs, signal_widths),
                               max_arith_width(e->rhs, signal_widths));
      if (e->bin_op == BinaryOp::Add || e->bin_op == BinaryOp::Sub ||
          e->bin_op == BinaryOp::Mul)
        best = std::max(best, expr_width(e, signal_widths));
      return best;
    }
  }
  return 0;
}

const char* to_token(UnaryOp op) {
  switch (op) {
    case UnaryOp::LogicalNot: return "!";
    case UnaryOp::BitNot: return "~";
    case UnaryOp::Negate: return "-";
  }
  return "?";
}

const char* to_token(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::BitAnd: return "&";
    case BinaryOp::BitOr: return "|";
    case BinaryOp::BitXor: return "^";
    case BinaryOp::LogicalAnd: return "&&";
    case BinaryOp::LogicalOr: return "||";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Neq: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Ge: return ">=";
  }
  return "?";
}

bool is_chainable(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Mul:
    case BinaryOp::BitAnd:
    case BinaryOp::BitOr:
    case BinaryOp::BitXor:
    case BinaryOp::LogicalAnd:
    case BinaryOp::LogicalOr:
      return true;
    default:
      return false;
  }
}

namespace {

std::string literal_text(const BitVector& lit) {
  // Plain decimal when the width is the minimal one; explicit size otherwise.
  if (lit.width == min_width_for(lit.value)) {
    return std::to_string(lit.value);
  }
  return std::to_string(lit.width) + "'d" + std::to_string(lit.value);
}

void print(const Expr& e, std::string& out, bool as_operand);

// Prints a left-leaning chain of one associative operator without inner
// parentheses, so serialize/parse is an identity on the tree shape.
void print_binary(const Expr& e, std::string& out) {
  const char* tok = to_token(e->bin_op);
  if (is_chainable(e->bin_op) && e->lhs->kind == ExprNode::Kind::Binary &&
      e->lhs->bin_op == e->bin_op) {
    print_binary(e->lhs, out);
  } else {
    print(e->lhs, out, /*as_operand=*/true);
  }
  out += ' ';
  out += tok;
  out += ' ';
  print(e->rhs, out, /*as_operand=*/true);
}

void print(const Expr& e, std::string& out, bool as_operand) {
  switch (e->kind) {
    case ExprNode::Kind::Literal:
      out += literal_text(e->literal);
      return;
    case ExprNode::Kind::Signal:
      out += e->signal;
      return;
    case ExprNode::Kind::Unary: {
      out += to_token(e->un_op);
      bool compound = e->operand->kind == ExprNode::Kind::Binary ||
                      e->operand->kind == ExprNode::Kind::Unary;
      if (compound) {
        out += '(';
        print(e->operand, out, false);
        out += ')';
      } else {
        print(e->operand, out, true);
      }
      return;
    }
    case ExprNode::Kind::Binary:
      if (as_operand) {
        out += '(';
        print_binary(e, out);
        out += ')';
      } else {
        print_binary(e, out);
      }
      return;
  }
}

void collect_signals(const Expr& e, std::vector<std::string>& out) {
  switch (e->kind) {
    case ExprNode::Kind::Literal:
      return;
    case ExprNode::Kind::Signal:
      out.push_back(e->signal);
      return;
    case ExprNode::Kind::Unary:
      collect_signals(e->operand, out);
      return;
    case ExprNode::Kind::Binary:
      collect_signals(e->lhs, out);
      collect_signals(e->rhs, out);
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out, /*as_operand=*/false);
  return out;
}

std::vector<std::string> signals_in(const Expr& e) {
  std::vector<std::string> out;
  collect_signals(e, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool references_any_signal(const Expr& e) {
  switch (e->kind) {
    case ExprNode::Kind::Literal:
      return false;
    case ExprNode::Kind::Signal:
      return true;
    case ExprNode::Kind::Unary:
      return references_any_signal(e->operand);
    case ExprNode::Kind::Binary:
      return references_any_signal(e->lhs) || references_any_signal(e->rhs);
  }
  return false;
}

bool is_constant_true(const Expr& e) {
  return e->kind == ExprNode::Kind::Literal && e->literal.value != 0;
}

}  // namespace fsmguard
