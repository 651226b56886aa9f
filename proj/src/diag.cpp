#include "fsmguard/diag.hpp"

namespace fsmguard {

std::string to_string(const Diagnostic& d) {
  std::string out = d.code;
  if (d.line > 0) {
    out += " at line " + std::to_string(d.line);
    if (d.col > 0) {
      out += ", col " + std::to_string(d.col);
    }
  }
  out += ": " + d.message;
  return out;
}

namespace {

std::string first_message(const std::vector<Diagnostic>& diags) {
  return diags.empty() ? std::string("parse error") : to_string(diags.front());
}

}  // namespace

ParseError::ParseError(Diagnostic d)
    : std::runtime_error(to_string(d)), diags_{std::move(d)} {}

ParseError::ParseError(std::string what, std::vector<Diagnostic> diags)
    : std::runtime_error(what.empty() ? first_message(diags) : std::move(what)),
      diags_(std::move(diags)) {}

}  // namespace fsmguard
