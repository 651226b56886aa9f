#include "fsmguard/planning.hpp"

#include <sstream>

namespace fsmguard {
namespace {

std::string bits(unsigned w) {
  return std::to_string(w) + (w == 1 ? " bit" : " bits");
}

std::string bit_adj(unsigned w) {
  return std::to_string(w) + "-bit";
}

std::string interface_section(const FsmSpec& spec) {
  std::ostringstream out;
  out << "Implement a synthesizable Verilog-2001 module named `" << spec.name << "`.\n";
  out << "Inputs:\n";
  out << "- clk: 1 bit, clock, rising edge active\n";
  out << "- rst_n: 1 bit, asynchronous reset, active low\n";
  for (const auto& s : spec.inputs) out << "- " << s.id << ": " << bits(s.width) << "\n";
  out << "Outputs:\n";
  for (const auto& s : spec.outputs) out << "- " << s.id << ": " << bits(s.width) << "\n";
  return out.str();
}

std::string encoding_section(const FsmSpec& spec) {
  std::ostringstream out;
  bool any_encoding = false;
  bool any_protected = false;
  for (const auto& st : spec.states) {
    any_encoding = any_encoding || st.encoding.has_value();
    any_protected = any_protected || st.is_protected;
  }
  // Free encodings with a protected state get one spare bit: an even-weight
  // assignment then puts every pair at Hamming distance 2 or more.
  unsigned width = min_register_width(spec.states.size());
  if (spec.register_width) {
    width = *spec.register_width;
  } else if (any_protected && !any_encoding && width < 64) {
    width += 1;
  }
  out << "The machine has " << spec.states.size()
      << (spec.states.size() == 1 ? " state" : " states")
      << ". Declare one localparam per state and a " << bit_adj(width)
      << " state register `state` with companion `next_state`.\n";
  if (any_encoding) {
    out << "Use exactly these encodings:\n";
    for (const auto& st : spec.states) {
      out << "- " << st.id << " = " << (st.encoding ? to_string(*st.encoding) : "(free)");
      if (st.is_protected) out << " (protected)";
      out << "\n";
    }
  } else {
    out << "States, in declaration order:\n";
    for (const auto& st : spec.states) {
      out << "- " << st.id;
      if (st.is_protected) out << " (protected)";
      out << "\n";
    }
    if (any_protected) {
      out << "Choose encodings so that every protected state sits at Hamming distance 2 or "
          << "more from every other state; the spare register bit leaves room for that.\n";
    }
  }
  if (width < 64 && (std::uint64_t{1} << width) > spec.states.size()) {
    const std::uint64_t spare = (std::uint64_t{1} << width) - spec.states.size();
    out << "The register has " << spare << " unused value"
        << (spare == 1 ? "" : "s") << "; unexpected values must fall back to the reset "
        << "state.\n";
  }
  return out.str();
}

std::string transition_section(const FsmSpec& spec) {
  std::ostringstream out;
  out << "Compute `next_state` in a combinational always block with a case statement over "
      << "`state`.\n";
  out << "Transitions:\n";
  for (const auto& t : spec.transitions)
    out << "- " << t.from << " -> " << t.to << " when " << to_string(t.guard) << "\n";
  out << "States with no matching condition hold their current state. Include a default "
      << "arm that selects the reset state `" << spec.reset_state << "`.\n";
  return out.str();
}

std::string update_section(const FsmSpec& spec) {
  std::ostringstream out;
  out << "Register the state on the rising clock edge. On `rst_n` low, load the reset "
      << "state `" << spec.reset_state << "` asynchronously; otherwise load `next_state`.\n";
  return out.str();
}

std::string output_section(const FsmSpec& spec) {
  std::ostringstream out;
  if (spec.kind == FsmKind::Moore)
    out << "Outputs depend on the current state only.\n";
  else
    out << "Outputs may combine the current state with the inputs.\n";
  out << "Per-state output values:\n";
  for (const auto& st : spec.states) {
    out << "- in " << st.id << ":";
    if (st.outputs.empty()) {
      out << " all outputs hold 0\n";
      continue;
    }
    out << "\n";
    for (const auto& [sig, expr] : st.outputs)
      out << "  - " << sig << " = " << to_string(expr) << "\n";
  }
  out << "Drive every output in every state; default unassigned outputs to 0.\n";
  return out.str();
}

}  // namespace

PromptTemplate build_template(const FsmSpec& spec) {
  PromptTemplate t;
  const std::array<std::string, 5> bodies = {
      interface_section(spec), encoding_section(spec), transition_section(spec),
      update_section(spec), output_section(spec)};
  for (std::size_t i = 0; i < t.sections.size(); ++i)
    t.sections[i] = {kPromptSectionNames[i], bodies[i]};
  return t;
}

std::string render_sections(const PromptTemplate& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.sections.size(); ++i) {
    out << "### Section " << i + 1 << ": " << t.sections[i].name << "\n\n";
    out << t.sections[i].body;
    if (!t.sections[i].body.empty() && t.sections[i].body.back() != '\n') out << "\n";
    out << "\n";
  }
  return out.str();
}

namespace {

constexpr const char* kPreamble =
    "You are a careful hardware engineer writing synthesizable Verilog-2001.\n"
    "Produce one complete module and nothing else: no testbench, no explanation, no "
    "markdown fences.\n"
    "Honor every requirement section below; where brevity and the security knowledge "
    "conflict, follow the security knowledge.\n"
    "\n"
    "The expected shape, shown for an unrelated two-state machine:\n"
    "\n"
    "module blink(\n"
    "  input wire clk,\n"
    "  input wire rst_n,\n"
    "  input wire enable,\n"
    "  output reg led\n"
    ");\n"
    "  localparam OFF = 1'b0;\n"
    "  localparam ON = 1'b1;\n"
    "  reg state;\n"
    "  reg next_state;\n"
    "  always @(*) begin\n"
    "    case (state)\n"
    "      OFF: next_state = enable ? ON : OFF;\n"
    "      ON: next_state = enable ? OFF : ON;\n"
    "      default: next_state = OFF;\n"
    "    endcase\n"
    "  end\n"
    "  always @(posedge clk or negedge rst_n) begin\n"
    "    if (!rst_n)\n"
    "      state <= OFF;\n"
    "    else\n"
    "      state <= next_state;\n"
    "  end\n"
    "  always @(*) begin\n"
    "    case (state)\n"
    "      ON: led = 1'b1;\n"
    "      default: led = 1'b0;\n"
    "    endcase\n"
    "  end\n"
    "endmodule\n";

void render_knowledge(std::ostringstream& out, const RetrievalResult& retrieval) {
  out << "## Security Knowledge\n\n";
  if (retrieval.codegen_items.empty()) {
    out << "No coding-stage security knowledge applies to this design.\n\n";
    return;
  }
  for (const auto& item : retrieval.codegen_items) {
    out << "- " << item.vuln_id;
    if (item.knowledge && !item.knowledge->type.empty())
      out << " (" << item.knowledge->type << ")";
    out << ":";
    if (item.knowledge && !item.knowledge->check.empty())
      out << " " << item.knowledge->check;
    out << "\n";
    if (!item.findings.empty()) {
      out << "  - found at:";
      for (std::size_t i = 0; i < item.findings.size(); ++i)
        out << (i ? ", " : " ") << item.findings[i].location;
      out << "\n";
    }
    if (!item.knowledge) continue;
    for (const auto& s : item.knowledge->suggestions) {
      out << "  - " << s.text << "\n";
      for (const auto& m : s.manners) out << "    - " << m << "\n";
    }
    for (const auto& ex : item.knowledge->bad_examples) {
      out << "  - avoid:\n";
      std::istringstream lines(ex);
      for (std::string line; std::getline(lines, line);) out << "      " << line << "\n";
    }
    for (const auto& ex : item.knowledge->good_examples) {
      out << "  - prefer:\n";
      std::istringstream lines(ex);
      for (std::string line; std::getline(lines, line);) out << "      " << line << "\n";
    }
  }
  out << "\n";
}

}  // namespace

std::string assemble_security_prompt(const FsmSpec& spec, const RetrievalResult& retrieval) {
  std::ostringstream out;
  out << kPreamble << "\n";
  render_knowledge(out, retrieval);
  out << "## Design Requirements\n\n";
  out << render_sections(build_template(spec));
  std::string text = out.str();
  while (text.size() >= 2 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n')
    text.pop_back();
  return text;
}

}  // namespace fsmguard
