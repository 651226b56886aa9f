#include "fsmguard/verilog_render.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace fsmguard {
namespace {

void print_verilog(const Expr& e, std::string& out, bool as_operand) {
  switch (e->kind) {
    case ExprNode::Kind::Literal:
      out += std::to_string(e->literal.width) + "'d" + std::to_string(e->literal.value);
      return;
    case ExprNode::Kind::Signal:
      out += e->signal;
      return;
    case ExprNode::Kind::Unary: {
      out += to_token(e->un_op);
      const bool compound = e->operand->kind == ExprNode::Kind::Binary ||
                            e->operand->kind == ExprNode::Kind::Unary;
      if (compound) out += '(';
      print_verilog(e->operand, out, true);
      if (compound) out += ')';
      return;
    }
    case ExprNode::Kind::Binary:
      if (as_operand) out += '(';
      print_verilog(e->lhs, out, true);
      out += ' ';
      out += to_token(e->bin_op);
      out += ' ';
      print_verilog(e->rhs, out, true);
      if (as_operand) out += ')';
      return;
  }
}

std::string range_of(unsigned width) {
  return width > 1 ? "[" + std::to_string(width - 1) + ":0] " : "";
}

std::string binary_literal(std::uint64_t value, unsigned width) {
  std::string bits;
  for (unsigned i = width; i-- > 0;) bits += (value >> i) & 1 ? '1' : '0';
  return std::to_string(width) + "'b" + bits;
}

}  // namespace

std::string to_verilog(const Expr& e) {
  std::string out;
  print_verilog(e, out, false);
  return out;
}

std::string render_verilog(const FsmSpec& spec, const RenderOptions& opts) {
  if (auto diags = validate(spec); !diags.empty())
    throw std::invalid_argument("cannot render invalid spec: " + to_string(diags.front()));

  const unsigned width =
      spec.register_width ? *spec.register_width : min_register_width(spec.states.size());
  std::map<std::string, std::uint64_t> enc;
  for (std::size_t i = 0; i < spec.states.size(); ++i) {
    const auto& st = spec.states[i];
    enc[st.id] = st.encoding ? st.encoding->value : static_cast<std::uint64_t>(i);
  }

  std::ostringstream out;
  out << "module " << spec.name << "(\n";
  out << "  input wire clk,\n";
  out << "  input wire rst_n";
  for (const auto& s : spec.inputs)
    out << ",\n  input wire " << range_of(s.width) << s.id;
  for (const auto& s : spec.outputs)
    out << ",\n  output reg " << range_of(s.width) << s.id;
  out << "\n);\n";

  for (const auto& st : spec.states)
    out << "  localparam " << st.id << " = " << binary_literal(enc.at(st.id), width)
        << ";\n";
  out << "  reg " << range_of(width) << "state;\n";
  out << "  reg " << range_of(width) << "next_state;\n";

  out << "\n  always @(*) begin\n";
  out << "    case (state)\n";
  for (const auto& st : spec.states) {
    out << "      " << st.id << ": begin\n";
    bool first = true;
    for (const auto& t : spec.transitions) {
      if (t.from != st.id) continue;
      out << "        " << (first ? "if" : "else if") << " (" << to_verilog(t.guard)
          << ")\n";
      out << "          next_state = " << t.to << ";\n";
      first = false;
    }
    if (first) {
      out << "        next_state = " << st.id << ";\n";
    } else {
      out << "        else\n";
      out << "          next_state = " << st.id << ";\n";
    }
    out << "      end\n";
  }
  if (opts.include_default)
    out << "      default: next_state = " << spec.reset_state << ";\n";
  out << "    endcase\n";
  out << "  end\n";

  out << "\n";
  if (opts.include_reset) {
    out << "  always @(posedge clk or negedge rst_n) begin\n";
    out << "    if (!rst_n)\n";
    out << "      state <= " << spec.reset_state << ";\n";
    out << "    else\n";
    out << "      state <= next_state;\n";
    out << "  end\n";
  } else {
    out << "  always @(posedge clk) begin\n";
    out << "    state <= next_state;\n";
    out << "  end\n";
  }

  if (!spec.outputs.empty()) {
    out << "\n  always @(*) begin\n";
    out << "    case (state)\n";
    auto render_arm = [&](const StateDecl* st) {
      for (const auto& sig : spec.outputs) {
        const Expr* expr = nullptr;
        if (st) {
          for (const auto& [name, e] : st->outputs)
            if (name == sig.id) expr = &e;
        }
        out << "        " << sig.id << " = "
            << (expr ? to_verilog(*expr)
                     : std::to_string(sig.width) + "'d0")
            << ";\n";
      }
    };
    for (const auto& st : spec.states) {
      out << "      " << st.id << ": begin\n";
      render_arm(&st);
      out << "      end\n";
    }
    out << "      default: begin\n";
    render_arm(nullptr);
    out << "      end\n";
    out << "    endcase\n";
    out << "  end\n";
  }

  out << "endmodule\n";
  return out.str();
}

}  // namespace fsmguard
