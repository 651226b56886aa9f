#pragma once

#include <string>

#include "fsmguard/fsm.hpp"

namespace fsmguard {

struct RenderOptions {
  bool include_default = true;  // default arm in the next-state case
  bool include_reset = true;    // async reset branch in the state register
};

// Straight-line Verilog-2001 for the machine: ANSI module header, one
// localparam per state, registered state with combinational next-state and
// output blocks. A machine that analyzes clean also lints clean when rendered
// with the default options. Requires a spec that validate() accepts.
std::string render_verilog(const FsmSpec& spec, const RenderOptions& opts = {});

// Verilog form of an expression: sized decimal literals, every compound
// operand parenthesized.
std::string to_verilog(const Expr& e);

}  // namespace fsmguard
