#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "fsmguard/diag.hpp"
#include "fsmguard/expr.hpp"
#include "fsmguard/expr_parse.hpp"
#include "fsmguard/fsm.hpp"
#include "fsmguard/fsm_text.hpp"

using namespace fsmguard;

namespace {

std::vector<std::string> codes_of(const char* text) {
  try {
    parse_fsm(text);
  } catch (const ParseError& e) {
    std::vector<std::string> codes;
    for (const auto& d : e.diagnostics()) codes.push_back(d.code);
    return codes;
  }
  return {};
}

bool has_code(const std::vector<std::string>& codes, const std::string& want) {
  return std::find(codes.begin(), codes.end(), want) != codes.end();
}

}  // namespace

TEST_CASE("minimal machine parses") {
  const FsmSpec spec = parse_fsm("fsm t moore\nstate A\nreset A\ntrans A -> A\n");
  CHECK(spec.name == "t");
  CHECK(spec.kind == FsmKind::Moore);
  CHECK(spec.states.size() == 1);
  CHECK(spec.transitions.size() == 1);
  CHECK(is_constant_true(spec.transitions[0].guard));
  CHECK(validate(spec).empty());
}

TEST_CASE("full grammar round") {
  const char* text =
      "# comment line\n"
      "fsm lock mealy\n"
      "width 2\n"
      "input code 8\n"
      "output open\n"
      "state SHUT encoding 2'b00 {\n"
      "  open = 0\n"
      "}\n"
      "state AJAR encoding 2'b11 protected {\n"
      "  open = code == 8'h5A\n"
      "}\n"
      "reset SHUT\n"
      "trans SHUT -> AJAR when code == 8'h5A\n"
      "trans AJAR -> SHUT\n";
  const FsmSpec spec = parse_fsm(text);
  CHECK(spec.kind == FsmKind::Mealy);
  CHECK(spec.register_width == 2u);
  CHECK(spec.states[1].is_protected);
  CHECK(spec.states[0].encoding->value == 0);
  CHECK(spec.states[1].encoding->value == 3);
  CHECK(spec.states[1].outputs.size() == 1);
  CHECK(validate(spec).empty());
}

TEST_CASE("register width inferred from encodings") {
  const FsmSpec spec = parse_fsm(
      "fsm t moore\nstate A encoding 3'b000\nstate B encoding 3'b001\nreset A\n"
      "trans A -> B\ntrans B -> A\n");
  CHECK(spec.register_width == 3u);
}

TEST_CASE("diagnostic codes per defect") {
  CHECK(has_code(codes_of("state A\nreset A\n"), "syntax-error"));
  CHECK(has_code(codes_of("fsm t moore\nstate A\ntrans A -> A\n"), "missing-reset"));
  CHECK(has_code(codes_of("fsm t moore\nstate A\nstate A\nreset A\n"), "duplicate-identifier"));
  CHECK(has_code(codes_of("fsm t moore\ninput a\nstate a\nreset a\n"), "duplicate-identifier"));
  CHECK(has_code(codes_of("fsm t moore\nstate A\nreset A\ntrans A -> B\n"), "unknown-state"));
  CHECK(has_code(codes_of("fsm t moore\nstate A\nreset B\n"), "missing-reset"));
  CHECK(has_code(codes_of("fsm t moore\nstate A\nreset A\ntrans A -> A when go\n"),
                 "unknown-signal"));
  CHECK(has_code(codes_of("fsm t moore\ninput go 8\nstate A\nreset A\ntrans A -> A when go\n"),
                 "width-violation"));
  CHECK(has_code(codes_of("fsm t moore\nwidth 1\nstate A\nstate B\nstate C\nreset A\n"
                          "trans A -> B\ntrans B -> C\ntrans C -> A\n"),
                 "width-violation"));
  CHECK(has_code(codes_of("fsm t moore\nstate A encoding 2'b00\nstate B\nreset A\n"
                          "trans A -> B\ntrans B -> A\n"),
                 "partial-encoding"));
  CHECK(has_code(codes_of("fsm t moore\ninput go\noutput y\n"
                          "state A {\n  y = go\n}\nreset A\ntrans A -> A\n"),
                 "moore-input-ref"));
  CHECK(has_code(codes_of("fsm t moore\nwidth 2\nstate A encoding 3'b001\nstate B\nreset A\n"
                          "trans A -> B\ntrans B -> A\n"),
                 "width-violation"));
  CHECK(has_code(codes_of("fsm t moore\noutput y\nstate A {\n  y = 1\n  y = 0\n}\n"
                          "reset A\ntrans A -> A\n"),
                 "duplicate-identifier"));
  CHECK(has_code(codes_of("fsm t moore\nstate A {\n  y = 1\n}\nreset A\ntrans A -> A\n"),
                 "unknown-signal"));
}

TEST_CASE("diagnostics carry positions and sort by location") {
  try {
    parse_fsm("fsm t moore\nstate A\nreset A\ntrans A -> B\ntrans C -> A\n");
    FAIL("expected rejection");
  } catch (const ParseError& e) {
    REQUIRE(e.diagnostics().size() == 2);
    CHECK(e.diagnostics()[0].line == 4);
    CHECK(e.diagnostics()[1].line == 5);
    CHECK(e.diagnostics()[0].code == "unknown-state");
  }
}

TEST_CASE("expression grammar") {
  CHECK(to_string(parse_expr("a + b + c")) == "a + b + c");
  CHECK(to_string(parse_expr("(a + b) * c")) == "(a + b) * c");
  CHECK(to_string(parse_expr("!(a == 2'b01)")) == "!(a == 2'd1)");
  CHECK(to_string(parse_expr("~x & y")) == "~x & y");
  CHECK(to_string(parse_expr("8'hFF")) == "255");
  CHECK(to_string(parse_expr("8'h0F")) == "8'd15");
  CHECK(to_string(parse_expr("4'b1_01")) == "4'd5");
  CHECK_THROWS_AS(parse_expr("a + b * c"), ParseError);
  CHECK_THROWS_AS(parse_expr("a - b - c"), ParseError);
  CHECK_THROWS_AS(parse_expr("a +"), ParseError);
  CHECK_THROWS_AS(parse_expr("(a"), ParseError);
  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("2'd9"), ParseError);
  CHECK_THROWS_AS(parse_expr("65'd0"), ParseError);
  CHECK_THROWS_AS(parse_expr("a $ b"), ParseError);
}

TEST_CASE("json form parses and validates") {
  const char* text = R"({
    "name": "t",
    "kind": "moore",
    "inputs": [{"id": "go", "width": 1}],
    "outputs": [{"id": "y", "width": 2}],
    "states": [
      {"id": "A", "outputs": {"y": "2'd2"}},
      {"id": "B"}
    ],
    "reset_state": "A",
    "transitions": [
      {"from": "A", "to": "B", "guard": "go"},
      {"from": "B", "to": "A"}
    ]
  })";
  const FsmSpec spec = parse_fsm_json(text);
  CHECK(spec.name == "t");
  CHECK(spec.states.size() == 2);
  CHECK(is_constant_true(spec.transitions[1].guard));
  CHECK(validate(spec).empty());

  const FsmSpec via_auto = parse_fsm_auto(text);
  CHECK(via_auto == spec);
}

TEST_CASE("auto detection picks the text grammar otherwise") {
  const FsmSpec spec = parse_fsm_auto("fsm t moore\nstate A\nreset A\ntrans A -> A\n");
  CHECK(spec.name == "t");
  CHECK_THROWS_AS(parse_fsm_auto("   \n  "), ParseError);
}

TEST_CASE("json rejections") {
  CHECK_THROWS_AS(parse_fsm_json("{"), ParseError);
  CHECK_THROWS_AS(parse_fsm_json("[]"), ParseError);
  CHECK_THROWS_AS(parse_fsm_json(R"({"name": "t"})"), ParseError);
}
