#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsmguard/diag.hpp"
#include "fsmguard/expr.hpp"

namespace fsmguard {

enum class FsmKind { Mealy, Moore };

enum class SignalDirection { Input, Output };

struct SignalDecl {
  std::string id;
  unsigned width = 1;
  SignalDirection direction = SignalDirection::Input;

  friend bool operator==(const SignalDecl&, const SignalDecl&) = default;
};

struct StateDecl {
  std::string id;
  std::optional<BitVector> encoding;
  bool is_protected = false;
  // Output assignments in declaration order; keys are declared output ids.
  std::vector<std::pair<std::string, Expr>> outputs;
};

bool operator==(const StateDecl& a, const StateDecl& b);

struct TransitionDecl {
  std::string from;
  std::string to;
  Expr guard;  // 1-bit expression over declared inputs
};

bool operator==(const TransitionDecl& a, const TransitionDecl& b);

// The machine: states, inputs, outputs, reset state, transition relation and
// per-state output logic, plus optional register width and encodings.
struct FsmSpec {
  std::string name;
  FsmKind kind = FsmKind::Moore;
  std::vector<SignalDecl> inputs;
  std::vector<SignalDecl> outputs;
  std::vector<StateDecl> states;
  std::string reset_state;
  std::vector<TransitionDecl> transitions;
  std::optional<unsigned> register_width;

  const StateDecl* find_state(const std::string& id) const;
  const SignalDecl* find_input(const std::string& id) const;
  const SignalDecl* find_output(const std::string& id) const;
  std::map<std::string, unsigned> input_widths() const;
};

bool operator==(const FsmSpec& a, const FsmSpec& b);

// Checks every structural invariant of the type; an empty result means the
// spec is valid. Codes match the parser's diagnostic codes.
std::vector<Diagnostic> validate(const FsmSpec& spec);

const char* to_string(FsmKind kind);

// Register width needed for n states: ceil(log2(n)) with a floor of 1.
unsigned min_register_width(std::size_t n_states);

}  // namespace fsmguard
