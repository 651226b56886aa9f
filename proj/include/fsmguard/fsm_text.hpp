#pragma once

#include <string>
#include <string_view>

#include "fsmguard/fsm.hpp"

namespace fsmguard {

// Text format, one declaration per line, '#' comments:
//
//   fsm <name> <mealy|moore>
//   width <n>
//   input <id> [width]
//   output <id> [width]
//   state <id> [encoding <literal>] [protected] [{ ... }]
//   reset <id>
//   trans <from> -> <to> [when <expr>]
//
// State blocks hold one `<output> = <expr>` line per assignment. Declarations
// may appear in any order after the fsm header. A missing `when` clause means
// an always-true guard. Throws ParseError carrying every diagnostic found.
FsmSpec parse_fsm(std::string_view text);

// Canonical rendering: header, width, inputs, outputs, states, reset,
// transitions, with all widths and guards explicit. parse_fsm(serialize_fsm(s))
// reproduces s for any valid spec.
std::string serialize_fsm(const FsmSpec& spec);

// JSON mirror of the same model; expressions and encodings travel as their
// canonical text forms.
FsmSpec parse_fsm_json(std::string_view text);
std::string serialize_fsm_json(const FsmSpec& spec);

// Dispatches on the first non-space byte: '{' means JSON, anything else the
// line format.
FsmSpec parse_fsm_auto(std::string_view text);

}  // namespace fsmguard
