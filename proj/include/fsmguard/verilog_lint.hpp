#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fsmguard/finding.hpp"
#include "fsmguard/fsm.hpp"

namespace fsmguard {

struct LintParam {
  std::string name;
  unsigned width = 1;
  std::uint64_t value = 0;  // raw digits, may exceed the width on purpose
  int line = 0;
};

struct LintReg {
  std::string name;
  unsigned width = 1;
  int line = 0;
};

struct LintCase {
  std::string selector;
  bool has_default = false;
  int line = 0;
};

struct LintModel {
  std::string module_name;
  std::vector<LintParam> params;
  std::vector<LintReg> regs;  // includes output regs
  std::vector<LintCase> cases;
  bool has_reset_branch = false;
  unsigned skipped_lines = 0;
};

// Line-level extraction of the constructs the lint rules look at. Arbitrary
// bytes are tolerated (unrecognized lines are counted and skipped); the only
// hard failures are unbalanced module/endmodule or case/endcase, reported as
// ParseError with the offending line.
LintModel extract_lint_model(std::string_view text);

// Rules:
//   LINT_MISSING_DEFAULT    state-register case without a default arm
//   LINT_MISSING_RESET      no reset branch (if (!rst_n) or equivalent)
//   LINT_DUPLICATE_ENCODING two localparams sharing width and value
//   LINT_WEAK_HAMMING       two same-width localparams at hamming distance 1
//   LINT_WIDTH              localparam value that does not fit its width
// With a spec, localparam names are matched to state names and weak-hamming
// pairs are limited to those involving a protected state; states that match
// no localparam disable that scoping and add a warning.
std::vector<Finding> lint_verilog(const LintModel& model, const FsmSpec* spec = nullptr,
                                  std::vector<std::string>* warnings = nullptr);

std::vector<Finding> lint_verilog_text(std::string_view text, const FsmSpec* spec = nullptr,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace fsmguard
