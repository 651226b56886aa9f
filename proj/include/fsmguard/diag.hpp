#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fsmguard {

// One diagnostic: a stable machine-readable code plus a human message, with
// an optional source position (1-based; 0 means "not applicable").
struct Diagnostic {
  std::string code;
  std::string message;
  int line = 0;
  int col = 0;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string to_string(const Diagnostic& d);

// Thrown by parsers and loaders on rejected input. Carries at least one
// diagnostic; code() is the code of the first.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(Diagnostic d);
  ParseError(std::string what, std::vector<Diagnostic> diags);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }
  const std::string& code() const { return diags_.front().code; }

private:
  std::vector<Diagnostic> diags_;
};

}  // namespace fsmguard
