#pragma once

#include <string_view>

#include "fsmguard/expr.hpp"

namespace fsmguard {

// Parses one expression. Chains of a single associative operator need no
// parentheses; mixing operators or repeating a non-associative one does.
// Literals are plain decimals or sized (4'b1010, 8'hff, 3'd5). Throws
// ParseError with codes syntax-error or width-violation; diagnostics carry
// the given line and are column-offset by col_base.
Expr parse_expr(std::string_view text, int line = 0, int col_base = 1);

}  // namespace fsmguard
