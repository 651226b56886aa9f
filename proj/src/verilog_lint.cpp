#include "fsmguard/verilog_lint.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>

#include "fsmguard/bitvec.hpp"
#include "fsmguard/diag.hpp"

namespace fsmguard {
namespace {

struct Token {
  std::string text;
  bool is_word = false;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) ||
                                 line[i] == '_' || line[i] == '$'))
        ++i;
      toks.push_back({line.substr(start, i - start), true});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      // number, possibly a sized literal like 4'b1010
      std::size_t start = i;
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      if (i < line.size() && line[i] == '\'') {
        ++i;
        if (i < line.size()) ++i;  // base letter
        while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) ||
                                   line[i] == '_'))
          ++i;
      }
      toks.push_back({line.substr(start, i - start), false});
      continue;
    }
    toks.push_back({std::string(1, c), false});
    ++i;
  }
  return toks;
}

// Accepts N'bXXX, N'hXX, N'dNN and plain decimals; raw values are kept even
// when they exceed the stated width so the width rule can see them.
bool parse_literal(const std::string& text, unsigned& width, std::uint64_t& value) {
  const auto quote = text.find('\'');
  if (quote == std::string::npos) {
    value = 0;
    for (char c : text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      if (value > (UINT64_MAX - (c - '0')) / 10) return false;
      value = value * 10 + (c - '0');
    }
    width = min_width_for(value);
    return !text.empty();
  }
  unsigned w = 0;
  if (quote == 0 || quote + 1 >= text.size()) return false;
  for (std::size_t i = 0; i < quote; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    w = w * 10 + static_cast<unsigned>(text[i] - '0');
    if (w > 64) return false;
  }
  if (w == 0) return false;
  unsigned radix = 0;
  switch (std::tolower(static_cast<unsigned char>(text[quote + 1]))) {
    case 'b': radix = 2; break;
    case 'd': radix = 10; break;
    case 'h': radix = 16; break;
    default: return false;
  }
  value = 0;
  bool any = false;
  for (std::size_t i = quote + 2; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '_') continue;
    int dv;
    if (c >= '0' && c <= '9') dv = c - '0';
    else if (c >= 'a' && c <= 'f') dv = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') dv = c - 'A' + 10;
    else return false;
    if (static_cast<unsigned>(dv) >= radix) return false;
    if (value > (UINT64_MAX - dv) / radix) return false;
    value = value * radix + dv;
    any = true;
  }
  width = w;
  return any;
}

bool is_keyword(const std::string& w) {
  static const std::set<std::string> kw = {
      "module", "endmodule", "input",  "output", "inout",   "wire", "reg",
      "logic",  "signed",    "always", "assign", "if",      "else", "case",
      "endcase", "default",  "begin",  "end",    "localparam", "parameter",
      "posedge", "negedge",  "or",     "and",    "not"};
  return kw.count(w) != 0;
}

std::string squeeze(const std::string& line) {
  std::string out;
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

class Extractor {
 public:
  LintModel run(std::string_view text) {
    split(text);
    for (std::size_t i = 0; i < lines_.size(); ++i) scan(static_cast<int>(i) + 1, lines_[i]);
    if (module_open_)
      throw ParseError({"syntax-error", "missing endmodule", module_line_});
    if (!case_stack_.empty())
      throw ParseError({"syntax-error", "missing endcase", case_stack_.back().line});
    return std::move(model_);
  }

 private:
  void split(std::string_view text) {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines_.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    if (!cur.empty()) lines_.push_back(cur);

    bool in_block = false;
    for (auto& line : lines_) {
      std::string out;
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (in_block) {
          if (line[i] == '*' && i + 1 < line.size() && line[i + 1] == '/') {
            in_block = false;
            ++i;
          }
          continue;
        }
        if (line[i] == '/' && i + 1 < line.size() && line[i + 1] == '*') {
          in_block = true;
          ++i;
          continue;
        }
        if (line[i] == '/' && i + 1 < line.size() && line[i + 1] == '/') break;
        out += line[i];
      }
      line = out;
    }
  }

  void scan(int lineno, const std::string& line) {
    const auto toks = tokenize(line);
    if (toks.empty()) return;

    const std::string squeezed = squeeze(line);
    for (const char* pat : {"if(!rst_n", "if(~rst_n", "if(rst_n==0", "if(rst_n==1'b0",
                            "if(rst_n==1'd0"}) {
      if (squeezed.find(pat) != std::string::npos) model_.has_reset_branch = true;
    }

    bool recognized = false;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      const Token& t = toks[i];
      if (!t.is_word) continue;
      if (t.text == "module") {
        if (module_open_)
          throw ParseError({"syntax-error", "nested module declaration", lineno});
        module_open_ = true;
        module_line_ = lineno;
        if (i + 1 < toks.size() && toks[i + 1].is_word) model_.module_name = toks[i + 1].text;
        recognized = true;
      } else if (t.text == "endmodule") {
        if (!module_open_)
          throw ParseError({"syntax-error", "endmodule without module", lineno});
        module_open_ = false;
        recognized = true;
      } else if (t.text == "case") {
        case_stack_.push_back({read_selector(toks, i), false, lineno});
        recognized = true;
      } else if (t.text == "endcase") {
        if (case_stack_.empty())
          throw ParseError({"syntax-error", "endcase without case", lineno});
        model_.cases.push_back(case_stack_.back());
        case_stack_.pop_back();
        recognized = true;
      } else if (t.text == "default") {
        if (!case_stack_.empty()) case_stack_.back().has_default = true;
        recognized = true;
      } else if (t.text == "localparam" || t.text == "parameter") {
        if (read_params(toks, i + 1, lineno)) recognized = true;
        break;
      } else if (t.text == "reg") {
        read_regs(toks, i + 1, lineno);
        recognized = true;
        break;
      } else if (is_keyword(t.text)) {
        recognized = true;
      }
    }
    if (!recognized && line.find('=') == std::string::npos) model_.skipped_lines++;
  }

  static std::string read_selector(const std::vector<Token>& toks, std::size_t case_at) {
    std::string sel;
    int depth = 0;
    for (std::size_t i = case_at + 1; i < toks.size(); ++i) {
      if (toks[i].text == "(") {
        ++depth;
        if (depth == 1) continue;
      }
      if (toks[i].text == ")") {
        --depth;
        if (depth == 0) break;
      }
      if (depth >= 1) {
        if (!sel.empty()) sel += ' ';
        sel += toks[i].text;
      }
    }
    return sel;
  }

  // localparam NAME = LITERAL {, NAME = LITERAL} ;
  bool read_params(const std::vector<Token>& toks, std::size_t at, int lineno) {
    std::size_t i = at;
    // optional range, as in `localparam [1:0] A = ...`
    unsigned range_width = 0;
    if (i < toks.size() && toks[i].text == "[") {
      const auto close = find_close_bracket(toks, i);
      if (!close) return false;
      range_width = bracket_width(toks, i, *close);
      i = *close + 1;
    }
    bool any = false;
    while (i + 2 < toks.size() && toks[i].is_word && toks[i + 1].text == "=") {
      unsigned width = 0;
      std::uint64_t value = 0;
      if (!parse_literal(toks[i + 2].text, width, value)) return any;
      if (range_width != 0) width = range_width;
      model_.params.push_back({toks[i].text, width, value, lineno});
      any = true;
      i += 3;
      if (i < toks.size() && toks[i].text == ",") ++i;
    }
    return any;
  }

  static std::optional<std::size_t> find_close_bracket(const std::vector<Token>& toks,
                                                       std::size_t open) {
    for (std::size_t i = open + 1; i < toks.size(); ++i)
      if (toks[i].text == "]") return i;
    return std::nullopt;
  }

  static unsigned bracket_width(const std::vector<Token>& toks, std::size_t open,
                                std::size_t close) {
    // [msb:lsb] with plain decimal bounds
    std::vector<std::uint64_t> nums;
    for (std::size_t i = open + 1; i < close; ++i) {
      unsigned w = 0;
      std::uint64_t v = 0;
      if (!toks[i].is_word && toks[i].text != ":" && parse_literal(toks[i].text, w, v))
        nums.push_back(v);
    }
    if (nums.size() != 2) return 0;
    const auto msb = std::max(nums[0], nums[1]);
    const auto lsb = std::min(nums[0], nums[1]);
    const auto width = msb - lsb + 1;
    return width <= 64 ? static_cast<unsigned>(width) : 0;
  }

  void read_regs(const std::vector<Token>& toks, std::size_t at, int lineno) {
    std::size_t i = at;
    unsigned width = 1;
    if (i < toks.size() && toks[i].text == "[") {
      const auto close = find_close_bracket(toks, i);
      if (close) {
        const unsigned w = bracket_width(toks, i, *close);
        if (w != 0) width = w;
        i = *close + 1;
      }
    }
    for (; i < toks.size(); ++i) {
      const Token& t = toks[i];
      if (t.text == ";" || t.text == ")" || t.text == "=") break;
      if (t.is_word && !is_keyword(t.text)) model_.regs.push_back({t.text, width, lineno});
    }
  }

  std::vector<std::string> lines_;
  LintModel model_;
  bool module_open_ = false;
  int module_line_ = 0;
  std::vector<LintCase> case_stack_;
};

std::string line_location(int line) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "line:%04d", line);
  return buf;
}

std::string binary_text(std::uint64_t value, unsigned width) {
  std::string bits;
  for (unsigned i = width; i-- > 0;) bits += (value >> i) & 1 ? '1' : '0';
  return std::to_string(width) + "'b" + bits;
}

}  // namespace

LintModel extract_lint_model(std::string_view text) {
  return Extractor{}.run(text);
}

std::vector<Finding> lint_verilog(const LintModel& model, const FsmSpec* spec,
                                  std::vector<std::string>* warnings) {
  std::vector<Finding> out;

  if (!model.module_name.empty() && !model.has_reset_branch)
    out.push_back({"LINT_MISSING_RESET", "CWE-1245", Phase::Structural,
                   "module:" + model.module_name,
                   "no reset branch like 'if (!rst_n)' found", FindingStatus::Raw});

  std::set<std::string> reg_names;
  for (const auto& r : model.regs) reg_names.insert(r.name);
  for (const auto& c : model.cases) {
    if (c.has_default) continue;
    std::string lowered = c.selector;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    bool stateish = reg_names.empty() || lowered.find("state") != std::string::npos;
    for (const auto& t : tokenize(c.selector))
      if (t.is_word && reg_names.count(t.text)) stateish = true;
    if (stateish)
      out.push_back({"LINT_MISSING_DEFAULT", "CWE-1245", Phase::Structural,
                     line_location(c.line),
                     "case (" + c.selector + ") has no default arm", FindingStatus::Raw});
  }

  for (const auto& p : model.params) {
    if (p.width < 64 && p.value >= (std::uint64_t{1} << p.width))
      out.push_back({"LINT_WIDTH", "CWE-190", Phase::Structural, p.name,
                     "localparam " + p.name + " value " + std::to_string(p.value) +
                         " does not fit " + std::to_string(p.width) + " bits",
                     FindingStatus::Raw});
  }

  // Protected-state scoping for the hamming rule needs every spec state to
  // match a localparam by name; otherwise the rule runs over all pairs.
  std::set<std::string> protected_params;
  bool scoped = false;
  if (spec) {
    std::set<std::string> param_names;
    for (const auto& p : model.params) param_names.insert(p.name);
    std::vector<std::string> unmatched;
    for (const auto& st : spec->states) {
      if (!param_names.count(st.id)) unmatched.push_back(st.id);
      else if (st.is_protected) protected_params.insert(st.id);
    }
    if (unmatched.empty()) {
      scoped = true;
    } else if (warnings) {
      std::string w = "weak-hamming scoping disabled; no localparam matches state";
      w += unmatched.size() == 1 ? " " : "s ";
      for (std::size_t i = 0; i < unmatched.size(); ++i)
        w += (i ? ", " : "") + ("'" + unmatched[i] + "'");
      warnings->push_back(std::move(w));
    }
  }

  for (std::size_t i = 0; i < model.params.size(); ++i) {
    for (std::size_t j = i + 1; j < model.params.size(); ++j) {
      const auto& a = model.params[i];
      const auto& b = model.params[j];
      if (a.width != b.width) continue;
      const std::uint64_t mask = width_mask(a.width);
      const std::uint64_t va = a.value & mask;
      const std::uint64_t vb = b.value & mask;
      if (va == vb) {
        out.push_back({"LINT_DUPLICATE_ENCODING", "DUPLICATE_ENCODING", Phase::Structural,
                       "(" + a.name + "," + b.name + ")",
                       "localparams share value " + binary_text(va, a.width),
                       FindingStatus::Raw});
      } else if (std::popcount(va ^ vb) == 1) {
        if (scoped && !protected_params.count(a.name) && !protected_params.count(b.name))
          continue;
        out.push_back({"LINT_WEAK_HAMMING", "WEAK_HAMMING", Phase::Structural,
                       "(" + a.name + "," + b.name + ")",
                       "hamming distance 1 between " + binary_text(va, a.width) + " and " +
                           binary_text(vb, b.width),
                       FindingStatus::Raw});
      }
    }
  }

  sort_findings(out);
  return out;
}

std::vector<Finding> lint_verilog_text(std::string_view text, const FsmSpec* spec,
                                       std::vector<std::string>* warnings) {
  return lint_verilog(extract_lint_model(text), spec, warnings);
}

}  // namespace fsmguard
