#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "fsmguard/fsm_text.hpp"
#include "fsmguard/injection.hpp"
#include "fsmguard/rng.hpp"
#include "fsmguard/verilog_lint.hpp"
#include "fsmguard/verilog_render.hpp"
#include "support/test_util.hpp"

using namespace fsmguard;

namespace {

std::set<std::string> ids_of(const std::vector<Finding>& fs) {
  std::set<std::string> ids;
  for (const auto& f : fs) ids.insert(f.detector_id);
  return ids;
}

const Finding* find_id(const std::vector<Finding>& fs, const std::string& id) {
  for (const auto& f : fs)
    if (f.detector_id == id) return &f;
  return nullptr;
}

}  // namespace

TEST_CASE("model extraction on rendered output") {
  const FsmSpec spec =
      parse_fsm_auto(testsupport::read_file(testsupport::fixture("partition.fsm")));
  const LintModel m = extract_lint_model(render_verilog(spec));

  CHECK(m.module_name == "vaultdoor");
  REQUIRE(m.params.size() == 3);
  CHECK(m.params[0].name == "IDLE");
  CHECK(m.params[0].width == 3);
  CHECK(m.params[0].value == 0);
  CHECK(m.params[2].name == "VAULT");
  CHECK(m.params[2].value == 3);
  CHECK(m.has_reset_branch);

  std::set<std::string> regs;
  for (const auto& r : m.regs) regs.insert(r.name);
  CHECK(regs.count("state"));
  CHECK(regs.count("next_state"));
  CHECK(regs.count("unlocked"));

  // One case block for next-state logic, one for outputs, both defaulted.
  REQUIRE(m.cases.size() == 2);
  for (const auto& c : m.cases) {
    CHECK(c.selector == "state");
    CHECK(c.has_default);
  }
}

TEST_CASE("rendered machines lint clean, including random ones") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CAPTURE(seed);
    const FsmSpec spec = generate_random_spec(seed);
    std::vector<std::string> warnings;
    REQUIRE(lint_verilog_text(render_verilog(spec), &spec, &warnings).empty());
    REQUIRE(warnings.empty());
  }
}

TEST_CASE("render options plant exactly the matching lint finding") {
  const FsmSpec spec = generate_random_spec(8);

  const auto no_default =
      lint_verilog_text(render_verilog(spec, {.include_default = false}), &spec);
  CHECK(ids_of(no_default) == std::set<std::string>{"LINT_MISSING_DEFAULT"});

  const auto no_reset =
      lint_verilog_text(render_verilog(spec, {.include_reset = false}), &spec);
  CHECK(ids_of(no_reset) == std::set<std::string>{"LINT_MISSING_RESET"});
}

TEST_CASE("missing default only fires on state-like selectors") {
  const char* text =
      "module m(input wire clk, input wire rst_n, output reg y);\n"
      "  reg [1:0] state;\n"
      "  always @(*) begin\n"
      "    case (state)\n"
      "      2'b00: y = 1;\n"
      "    endcase\n"
      "    case (mode)\n"
      "      2'b01: y = 0;\n"
      "      default: y = 1;\n"
      "    endcase\n"
      "    case (mode)\n"
      "      2'b01: y = 0;\n"
      "    endcase\n"
      "  end\n"
      "  always @(posedge clk) begin\n"
      "    if (!rst_n) y <= 0;\n"
      "  end\n"
      "endmodule\n";
  const auto fs = lint_verilog_text(text);
  const auto* miss = find_id(fs, "LINT_MISSING_DEFAULT");
  REQUIRE(miss != nullptr);
  CHECK(miss->location == "line:0004");
  CHECK(miss->evidence == "case (state) has no default arm");
  // The defaulted and non-state cases stay quiet: exactly one finding.
  CHECK(fs.size() == 1);
}

TEST_CASE("missing reset names the module") {
  const char* text =
      "module norst(input wire clk, output reg q);\n"
      "  always @(posedge clk) q <= ~q;\n"
      "endmodule\n";
  const auto fs = lint_verilog_text(text);
  const auto* miss = find_id(fs, "LINT_MISSING_RESET");
  REQUIRE(miss != nullptr);
  CHECK(miss->location == "module:norst");

  // Accepted reset idioms.
  for (const char* idiom : {"if (!rst_n)", "if (~rst_n)", "if (rst_n == 0)",
                            "if (rst_n == 1'b0)"}) {
    CAPTURE(idiom);
    const std::string ok = std::string("module m(input wire rst_n);\n  always @(*) ") +
                           idiom + " x <= 0;\nendmodule\n";
    CHECK(find_id(lint_verilog_text(ok), "LINT_MISSING_RESET") == nullptr);
  }
}

TEST_CASE("encoding rules: duplicates, weak pairs, width misfits") {
  const char* text =
      "module m(input wire rst_n);\n"
      "  localparam A = 2'b00;\n"
      "  localparam B = 2'b00;\n"
      "  localparam C = 2'b01;\n"
      "  localparam D = 3'b111;\n"
      "  localparam E = 2'd7;\n"
      "  always @(*) if (!rst_n) x <= 0;\n"
      "endmodule\n";
  const auto fs = lint_verilog_text(text);

  const auto* dup = find_id(fs, "LINT_DUPLICATE_ENCODING");
  REQUIRE(dup != nullptr);
  CHECK(dup->location == "(A,B)");
  CHECK(dup->evidence == "localparams share value 2'b00");

  // Width mismatches are never compared: D pairs with nobody.
  for (const auto& f : fs) CHECK(f.location.find("D") == std::string::npos);

  const auto* width = find_id(fs, "LINT_WIDTH");
  REQUIRE(width != nullptr);
  CHECK(width->location == "E");
  CHECK(width->evidence == "localparam E value 7 does not fit 2 bits");

  // A,C and B,C sit at distance 1; E overflows to 2'b11, distance 1 from C.
  std::size_t weak = 0;
  for (const auto& f : fs) weak += f.detector_id == "LINT_WEAK_HAMMING";
  CHECK(weak == 3);
}

TEST_CASE("spec scoping narrows weak-hamming to protected pairs") {
  const FsmSpec spec =
      parse_fsm_auto(testsupport::read_file(testsupport::fixture("launcher.fsm")));
  const std::string bad = testsupport::read_file(testsupport::fixture("launcher_bad.v"));

  // Unscoped, ARMED/LAUNCH and IDLE/ARMED both sit one bit apart... the
  // distance-1 pairs all show up.
  const auto unscoped = lint_verilog_text(bad);
  std::size_t weak_unscoped = 0;
  for (const auto& f : unscoped) weak_unscoped += f.detector_id == "LINT_WEAK_HAMMING";

  // Scoped by the machine, only pairs touching the protected LAUNCH remain.
  std::vector<std::string> warnings;
  const auto scoped = lint_verilog_text(bad, &spec, &warnings);
  CHECK(warnings.empty());
  const auto* weak = find_id(scoped, "LINT_WEAK_HAMMING");
  REQUIRE(weak != nullptr);
  CHECK(weak->location == "(ARMED,LAUNCH)");
  CHECK(weak->evidence == "hamming distance 1 between 2'b10 and 2'b11");
  CHECK(ids_of(scoped) ==
        std::set<std::string>{"LINT_MISSING_DEFAULT", "LINT_WEAK_HAMMING"});
  CHECK(weak_unscoped >= 1);

  // A machine whose states match no localparam disables scoping loudly.
  const FsmSpec other = parse_fsm(
      "fsm other moore\nstate X\nstate Y\nreset X\ntrans X -> Y\ntrans Y -> X\n");
  std::vector<std::string> complaints;
  (void)lint_verilog_text(bad, &other, &complaints);
  REQUIRE(complaints.size() == 1);
  CHECK(complaints[0].find("scoping disabled") != std::string::npos);
  CHECK(complaints[0].find("'X', 'Y'") != std::string::npos);
}

TEST_CASE("good and bad recorded designs split as expected") {
  const FsmSpec spec =
      parse_fsm_auto(testsupport::read_file(testsupport::fixture("launcher.fsm")));
  CHECK(lint_verilog_text(testsupport::read_file(testsupport::fixture("launcher_good.v")),
                          &spec)
            .empty());
  const auto bad =
      lint_verilog_text(testsupport::read_file(testsupport::fixture("launcher_bad.v")),
                        &spec);
  CHECK(ids_of(bad) ==
        std::set<std::string>{"LINT_MISSING_DEFAULT", "LINT_WEAK_HAMMING"});
}

TEST_CASE("comments never reach the rules") {
  const char* text =
      "module m(input wire rst_n); // case (state)\n"
      "  /* localparam A = 2'b00;\n"
      "     localparam B = 2'b00; */\n"
      "  localparam C = 2'b10; // localparam D = 2'b10;\n"
      "  always @(*) if (!rst_n) /* case (x) */ y <= C;\n"
      "endmodule\n";
  const LintModel m = extract_lint_model(text);
  REQUIRE(m.params.size() == 1);
  CHECK(m.params[0].name == "C");
  CHECK(m.cases.empty());
  CHECK(lint_verilog_text(text).empty());
}

TEST_CASE("unbalanced structure is a parse error") {
  CHECK_THROWS_AS(extract_lint_model("module m(input wire x);\n"),
                  ParseError);
  CHECK_THROWS_AS(extract_lint_model("module m();\n  case (state)\nendmodule\n"),
                  ParseError);
  CHECK_THROWS_AS(extract_lint_model("module a();\nmodule b();\nendmodule\nendmodule\n"),
                  ParseError);
  try {
    extract_lint_model("module m(input wire x);\n  case (state)\n  endcase\n");
    FAIL("expected rejection");
  } catch (const ParseError& e) {
    CHECK(e.code() == "syntax-error");
    CHECK(e.diagnostics()[0].line == 1);  // the unclosed module
  }
}

TEST_CASE("arbitrary bytes never crash the extractor") {
  Rng rng(20250816);
  std::size_t parse_errors = 0;
  for (int round = 0; round < 300; ++round) {
    std::string junk;
    // Raw bytes alone rarely spell a keyword, so half the rounds sprinkle
    // structural tokens into the noise to stress the balance checks too.
    for (std::size_t line = 0, n = rng.index(12); line < n; ++line) {
      if (round % 2 == 0 && rng.coin()) {
        static const char* tokens[] = {"module m(",  "endmodule", "case (state)",
                                       "endcase",    "localparam A = 2'b01;",
                                       "default: x;"};
        junk += tokens[rng.index(6)];
      } else {
        const std::size_t len = rng.index(40);
        for (std::size_t i = 0; i < len; ++i)
          junk += static_cast<char>(rng.range(1, 255));
      }
      junk += '\n';
    }
    try {
      const LintModel m = extract_lint_model(junk);
      (void)lint_verilog(m);
    } catch (const ParseError&) {
      ++parse_errors;
    }
  }
  // Both outcomes must occur: plenty of rounds parse, and unbalanced
  // module/case tokens must be caught rather than crash.
  CHECK(parse_errors > 0);
  CHECK(parse_errors < 300);
}

TEST_CASE("unrecognized lines are counted, not fatal") {
  const LintModel m = extract_lint_model(
      "module m(input wire rst_n);\n"
      "  this line means nothing\n"
      "  neither does this one\n"
      "  always @(*) if (!rst_n) q <= 0;\n"
      "endmodule\n");
  CHECK(m.skipped_lines >= 2);
}
