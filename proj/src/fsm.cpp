#include "fsmguard/fsm.hpp"

#include <algorithm>
#include <set>

namespace fsmguard {

bool operator==(const StateDecl& a, const StateDecl& b) {
  if (a.id != b.id || a.encoding != b.encoding || a.is_protected != b.is_protected) return false;
  if (a.outputs.size() != b.outputs.size()) return false;
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    if (a.outputs[i].first != b.outputs[i].first) return false;
    if (!expr_equal(a.outputs[i].second, b.outputs[i].second)) return false;
  }
  return true;
}

bool operator==(const TransitionDecl& a, const TransitionDecl& b) {
  return a.from == b.from && a.to == b.to && expr_equal(a.guard, b.guard);
}

bool operator==(const FsmSpec& a, const FsmSpec& b) {
  return a.name == b.name && a.kind == b.kind && a.inputs == b.inputs &&
         a.outputs == b.outputs && a.states == b.states && a.reset_state == b.reset_state &&
         a.transitions == b.transitions && a.register_width == b.register_width;
}

const StateDecl* FsmSpec::find_state(const std::string& id) const {
  for (const auto& s : states)
    if (s.id == id) return &s;
  return nullptr;
}

const SignalDecl* FsmSpec::find_input(const std::string& id) const {
  for (const auto& s : inputs)
    if (s.id == id) return &s;
  return nullptr;
}

const SignalDecl* FsmSpec::find_output(const std::string& id) const {
  for (const auto& s : outputs)
    if (s.id == id) return &s;
  return nullptr;
}

std::map<std::string, unsigned> FsmSpec::input_widths() const {
  std::map<std::string, unsigned> w;
  for (const auto& s : inputs) w[s.id] = s.width;
  return w;
}

const char* to_string(FsmKind kind) {
  return kind == FsmKind::Mealy ? "mealy" : "moore";
}

unsigned min_register_width(std::size_t n_states) {
  unsigned w = 1;
  while ((std::uint64_t{1} << w) < n_states) ++w;
  return w;
}

namespace {

void check_signal_list(const std::vector<SignalDecl>& sigs, std::set<std::string>& seen,
                       std::vector<Diagnostic>& out) {
  for (const auto& s : sigs) {
    if (s.id.empty())
      out.push_back({"syntax-error", "empty signal identifier"});
    else if (!seen.insert(s.id).second)
      out.push_back({"duplicate-identifier", "duplicate identifier '" + s.id + "'"});
    if (s.width < 1 || s.width > 64)
      out.push_back({"width-violation",
                     "signal '" + s.id + "' width " + std::to_string(s.width) +
                         " outside 1..64"});
  }
}

void check_expr_signals(const Expr& e, const FsmSpec& spec, const std::string& where,
                        std::vector<Diagnostic>& out) {
  for (const auto& id : signals_in(e)) {
    if (!spec.find_input(id))
      out.push_back({"unknown-signal",
                     "expression in " + where + " references '" + id +
                         "' which is not a declared input"});
  }
}

}  // namespace

std::vector<Diagnostic> validate(const FsmSpec& spec) {
  std::vector<Diagnostic> out;

  if (spec.name.empty()) out.push_back({"syntax-error", "machine has no name"});
  if (spec.states.empty()) out.push_back({"syntax-error", "machine has no states"});

  std::set<std::string> seen;
  check_signal_list(spec.inputs, seen, out);
  check_signal_list(spec.outputs, seen, out);

  if (spec.register_width) {
    unsigned w = *spec.register_width;
    if (w < 1 || w > 64) {
      out.push_back({"width-violation",
                     "register width " + std::to_string(w) + " outside 1..64"});
    } else if (w < 64 && (std::uint64_t{1} << w) < spec.states.size()) {
      out.push_back({"width-violation",
                     "register width " + std::to_string(w) + " cannot encode " +
                         std::to_string(spec.states.size()) + " states"});
    }
  }

  std::size_t n_encoded = 0;
  for (const auto& st : spec.states) {
    if (st.id.empty())
      out.push_back({"syntax-error", "empty state identifier"});
    else if (!seen.insert(st.id).second)
      out.push_back({"duplicate-identifier", "duplicate identifier '" + st.id + "'"});

    if (st.encoding) {
      ++n_encoded;
      if (spec.register_width && st.encoding->width != *spec.register_width)
        out.push_back({"width-violation",
                       "state '" + st.id + "' encoding width " +
                           std::to_string(st.encoding->width) +
                           " does not match register width " +
                           std::to_string(*spec.register_width)});
      if (st.encoding->width >= 1 && st.encoding->width <= 64 &&
          (st.encoding->value & ~width_mask(st.encoding->width)) != 0)
        out.push_back({"width-violation",
                       "state '" + st.id + "' encoding value does not fit its width"});
    }

    std::set<std::string> assigned;
    for (const auto& [sig, expr] : st.outputs) {
      if (!spec.find_output(sig))
        out.push_back({"unknown-signal",
                       "state '" + st.id + "' assigns '" + sig +
                           "' which is not a declared output"});
      if (!assigned.insert(sig).second)
        out.push_back({"duplicate-identifier",
                       "state '" + st.id + "' assigns '" + sig + "' more than once"});
      if (!expr) {
        out.push_back({"syntax-error",
                       "state '" + st.id + "' has an empty expression for '" + sig + "'"});
        continue;
      }
      if (spec.kind == FsmKind::Moore && references_any_signal(expr))
        out.push_back({"moore-input-ref",
                       "moore machine output '" + sig + "' in state '" + st.id +
                           "' references a signal"});
      else
        check_expr_signals(expr, spec, "state '" + st.id + "' output '" + sig + "'", out);
    }
  }

  if (n_encoded != 0 && n_encoded != spec.states.size())
    out.push_back({"partial-encoding",
                   "only " + std::to_string(n_encoded) + " of " +
                       std::to_string(spec.states.size()) + " states are encoded"});
  if (n_encoded != 0 && !spec.register_width)
    out.push_back({"width-violation", "states are encoded but no register width is set"});

  if (spec.reset_state.empty())
    out.push_back({"missing-reset", "no reset state declared"});
  else if (!spec.find_state(spec.reset_state))
    out.push_back({"missing-reset",
                   "reset state '" + spec.reset_state + "' is not a declared state"});

  const auto in_w = spec.input_widths();
  int idx = 0;
  for (const auto& t : spec.transitions) {
    const std::string where = "transition " + std::to_string(idx) + " (" + t.from +
                              " -> " + t.to + ")";
    if (!spec.find_state(t.from))
      out.push_back({"unknown-state", where + " leaves undeclared state '" + t.from + "'"});
    if (!spec.find_state(t.to))
      out.push_back({"unknown-state", where + " enters undeclared state '" + t.to + "'"});
    if (!t.guard) {
      out.push_back({"syntax-error", where + " has no guard"});
    } else {
      check_expr_signals(t.guard, spec, where, out);
      try {
        unsigned gw = expr_width(t.guard, in_w);
        if (gw != 1)
          out.push_back({"width-violation",
                         where + " guard has width " + std::to_string(gw) +
                             ", expected 1"});
      } catch (const std::out_of_range&) {
        // unknown signal already reported above
      }
    }
    ++idx;
  }

  return out;
}

}  // namespace fsmguard
