#include "fsmguard/fsm_text.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fsmguard/expr_parse.hpp"

namespace fsmguard {
namespace {

using ordered_json = nlohmann::ordered_json;

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_reserved(const std::string& s) {
  static const std::set<std::string> words = {"fsm",   "width", "input",    "output",
                                              "state", "reset", "trans",    "encoding",
                                              "protected", "when"};
  return words.count(s) != 0;
}

struct Tok {
  std::string text;
  int col;
};

std::vector<Tok> split_tokens(const std::string& line) {
  std::vector<Tok> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    toks.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return toks;
}

// Locates the assignment '=' in a state-block line, skipping ==, !=, <=, >=.
std::size_t find_assign_eq(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] != '=') continue;
    if (i + 1 < line.size() && line[i + 1] == '=') {
      ++i;
      continue;
    }
    if (i > 0 && (line[i - 1] == '!' || line[i - 1] == '<' || line[i - 1] == '>' ||
                  line[i - 1] == '='))
      continue;
    return i;
  }
  return std::string::npos;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

class TextParser {
 public:
  FsmSpec run(std::string_view text) {
    split_lines(text);
    for (std::size_t i = 0; i < lines_.size(); ++i) handle_line(i);
    if (in_block_)
      diag("syntax-error", "unterminated state block for '" + block_state_ + "'",
           block_line_);
    finish();
    if (!diags_.empty()) {
      std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a,
                                                        const Diagnostic& b) {
        const int la = a.line == 0 ? INT_MAX : a.line;
        const int lb = b.line == 0 ? INT_MAX : b.line;
        return la != lb ? la < lb : a.col < b.col;
      });
      std::string what = to_string(diags_.front());
      if (diags_.size() > 1)
        what += " (and " + std::to_string(diags_.size() - 1) + " more)";
      throw ParseError(what, diags_);
    }
    return spec_;
  }

 private:
  struct RawAssign {
    std::string sig;
    int sig_col;
    std::string expr;
    int line;
    int expr_col;
  };
  struct RawState {
    StateDecl decl;
    int line;
    std::vector<RawAssign> assigns;
  };
  struct RawTrans {
    std::string from, to, guard;
    int line;
    int from_col, to_col, guard_col;
  };

  void split_lines(std::string_view text) {
    std::string cur;
    for (char c : text) {
      if (c == '\n') {
        lines_.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) lines_.push_back(cur);
    for (auto& l : lines_) {
      auto hash = l.find('#');
      if (hash != std::string::npos) l.erase(hash);
    }
  }

  void diag(std::string code, std::string msg, int line, int col = 0) {
    diags_.push_back({std::move(code), std::move(msg), line, col});
  }

  std::string check_name(const Tok& t, int line) {
    if (!is_identifier(t.text)) {
      diag("syntax-error", "'" + t.text + "' is not a valid identifier", line, t.col);
      return {};
    }
    if (is_reserved(t.text)) {
      diag("syntax-error", "'" + t.text + "' is a reserved word", line, t.col);
      return {};
    }
    return t.text;
  }

  void declare(const std::string& id, int line, int col) {
    if (!id.empty() && !names_.insert(id).second)
      diag("duplicate-identifier", "duplicate identifier '" + id + "'", line, col);
  }

  void handle_line(std::size_t index) {
    const int line = static_cast<int>(index) + 1;
    const std::string& raw = lines_[index];
    auto toks = split_tokens(raw);
    if (toks.empty()) return;

    if (in_block_) {
      handle_block_line(raw, toks, line);
      return;
    }

    const std::string& kw = toks[0].text;
    if (!seen_header_ && kw != "fsm") {
      diag("syntax-error", "expected 'fsm <name> <mealy|moore>' header first", line,
           toks[0].col);
      seen_header_ = true;  // report once, keep going
    }

    if (kw == "fsm") {
      handle_fsm(toks, line);
    } else if (kw == "width") {
      handle_width(toks, line);
    } else if (kw == "input" || kw == "output") {
      handle_signal(toks, line, kw == "input");
    } else if (kw == "state") {
      handle_state(toks, line);
    } else if (kw == "reset") {
      handle_reset(toks, line);
    } else if (kw == "trans") {
      handle_trans(raw, toks, line);
    } else if (kw == "}") {
      diag("syntax-error", "'}' outside a state block", line, toks[0].col);
    } else {
      diag("syntax-error", "unknown keyword '" + kw + "'", line, toks[0].col);
    }
  }

  void handle_fsm(const std::vector<Tok>& toks, int line) {
    if (have_fsm_) {
      diag("syntax-error", "duplicate fsm header", line, toks[0].col);
      return;
    }
    have_fsm_ = true;
    seen_header_ = true;
    if (toks.size() != 3) {
      diag("syntax-error", "expected 'fsm <name> <mealy|moore>'", line, toks[0].col);
      return;
    }
    spec_.name = check_name(toks[1], line);
    if (toks[2].text == "mealy")
      spec_.kind = FsmKind::Mealy;
    else if (toks[2].text == "moore")
      spec_.kind = FsmKind::Moore;
    else
      diag("syntax-error", "machine kind must be 'mealy' or 'moore'", line, toks[2].col);
  }

  void handle_width(const std::vector<Tok>& toks, int line) {
    if (have_width_) {
      diag("syntax-error", "duplicate width declaration", line, toks[0].col);
      return;
    }
    have_width_ = true;
    width_line_ = line;
    if (toks.size() != 2) {
      diag("syntax-error", "expected 'width <n>'", line, toks[0].col);
      return;
    }
    unsigned w = parse_width(toks[1], line);
    if (w != 0) spec_.register_width = w;
  }

  unsigned parse_width(const Tok& t, int line) {
    unsigned w = 0;
    for (char c : t.text) {
      if (!std::isdigit(static_cast<unsigned char>(c)) || w > 64) {
        w = 0;
        break;
      }
      w = w * 10 + static_cast<unsigned>(c - '0');
    }
    if (w < 1 || w > 64) {
      diag("width-violation", "width '" + t.text + "' outside 1..64", line, t.col);
      return 0;
    }
    return w;
  }

  void handle_signal(const std::vector<Tok>& toks, int line, bool is_input) {
    if (toks.size() != 2 && toks.size() != 3) {
      diag("syntax-error",
           std::string("expected '") + (is_input ? "input" : "output") + " <id> [width]'",
           line, toks[0].col);
      return;
    }
    SignalDecl sig;
    sig.id = check_name(toks[1], line);
    sig.direction = is_input ? SignalDirection::Input : SignalDirection::Output;
    if (toks.size() == 3) {
      unsigned w = parse_width(toks[2], line);
      if (w == 0) return;
      sig.width = w;
    }
    declare(sig.id, line, toks[1].col);
    if (sig.id.empty()) return;
    (is_input ? spec_.inputs : spec_.outputs).push_back(sig);
  }

  void handle_state(const std::vector<Tok>& toks, int line) {
    if (toks.size() < 2) {
      diag("syntax-error", "expected 'state <id> ...'", line, toks[0].col);
      return;
    }
    RawState rs;
    rs.line = line;
    rs.decl.id = check_name(toks[1], line);
    declare(rs.decl.id, line, toks[1].col);

    bool open = false;
    for (std::size_t i = 2; i < toks.size(); ++i) {
      const Tok& t = toks[i];
      if (t.text == "{") {
        if (i + 1 != toks.size())
          diag("syntax-error", "'{' must end the state line", line, t.col);
        open = true;
        break;
      }
      if (t.text == "protected") {
        if (rs.decl.is_protected)
          diag("syntax-error", "duplicate 'protected' marker", line, t.col);
        rs.decl.is_protected = true;
      } else if (t.text == "encoding") {
        if (rs.decl.encoding)
          diag("syntax-error", "duplicate 'encoding' clause", line, t.col);
        if (i + 1 >= toks.size()) {
          diag("syntax-error", "'encoding' needs a literal", line, t.col);
          break;
        }
        rs.decl.encoding = parse_encoding(toks[++i], line);
      } else {
        diag("syntax-error", "unexpected '" + t.text + "' on state line", line, t.col);
      }
    }

    states_.push_back(std::move(rs));
    if (open) {
      in_block_ = true;
      block_state_ = states_.back().decl.id;
      block_line_ = line;
    }
  }

  std::optional<BitVector> parse_encoding(const Tok& t, int line) {
    if (t.text.find('\'') == std::string::npos) {
      diag("syntax-error", "state encoding must be a sized literal like 2'b01", line,
           t.col);
      return std::nullopt;
    }
    try {
      Expr e = parse_expr(t.text, line, t.col);
      if (e->kind != ExprNode::Kind::Literal) {
        diag("syntax-error", "state encoding must be a literal", line, t.col);
        return std::nullopt;
      }
      return e->literal;
    } catch (const ParseError& err) {
      diags_.insert(diags_.end(), err.diagnostics().begin(), err.diagnostics().end());
      return std::nullopt;
    }
  }

  void handle_block_line(const std::string& raw, const std::vector<Tok>& toks, int line) {
    if (toks.size() == 1 && toks[0].text == "}") {
      in_block_ = false;
      return;
    }
    const std::size_t eq = find_assign_eq(raw);
    if (eq == std::string::npos) {
      diag("syntax-error", "expected '<output> = <expr>' inside state block", line,
           toks[0].col);
      return;
    }
    RawAssign a;
    a.line = line;
    const std::string lhs = trim(raw.substr(0, eq));
    a.sig_col = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
    if (!is_identifier(lhs)) {
      diag("syntax-error", "assignment target '" + lhs + "' is not an identifier", line,
           a.sig_col);
      return;
    }
    a.sig = lhs;
    a.expr = trim(raw.substr(eq + 1));
    a.expr_col = static_cast<int>(eq) + 2;
    if (a.expr.empty()) {
      diag("syntax-error", "assignment to '" + lhs + "' has no expression", line,
           static_cast<int>(eq) + 1);
      return;
    }
    states_.back().assigns.push_back(std::move(a));
  }

  void handle_reset(const std::vector<Tok>& toks, int line) {
    if (have_reset_) {
      diag("syntax-error", "duplicate reset declaration", line, toks[0].col);
      return;
    }
    have_reset_ = true;
    reset_line_ = line;
    if (toks.size() != 2) {
      diag("syntax-error", "expected 'reset <state>'", line, toks[0].col);
      return;
    }
    spec_.reset_state = toks[1].text;
  }

  void handle_trans(const std::string& raw, const std::vector<Tok>& toks, int line) {
    if (toks.size() < 4 || toks[2].text != "->") {
      diag("syntax-error", "expected 'trans <from> -> <to> [when <expr>]'", line,
           toks[0].col);
      return;
    }
    RawTrans t;
    t.line = line;
    t.from = toks[1].text;
    t.from_col = toks[1].col;
    t.to = toks[3].text;
    t.to_col = toks[3].col;
    t.guard_col = 0;
    if (toks.size() > 4) {
      if (toks[4].text != "when") {
        diag("syntax-error", "expected 'when' after transition target", line, toks[4].col);
        return;
      }
      const std::size_t at = static_cast<std::size_t>(toks[4].col) - 1 + 4;
      t.guard = trim(raw.substr(at));
      t.guard_col = static_cast<int>(at) + 1 +
                    static_cast<int>(raw.substr(at).find_first_not_of(" \t"));
      if (t.guard.empty()) {
        diag("syntax-error", "'when' needs an expression", line, toks[4].col);
        return;
      }
    }
    trans_.push_back(std::move(t));
  }

  Expr parse_checked(const std::string& text, int line, int col) {
    try {
      return parse_expr(text, line, col);
    } catch (const ParseError& err) {
      diags_.insert(diags_.end(), err.diagnostics().begin(), err.diagnostics().end());
      return nullptr;
    }
  }

  void check_input_refs(const Expr& e, const std::string& what, int line, int col) {
    if (!e) return;
    for (const auto& id : signals_in(e)) {
      if (!spec_.find_input(id))
        diag("unknown-signal", what + " references '" + id + "' which is not a declared input",
             line, col);
    }
  }

  void finish() {
    if (!have_fsm_) diag("syntax-error", "missing 'fsm <name> <mealy|moore>' header", 1);

    // Register width: explicit declaration wins, otherwise infer from encodings.
    unsigned inferred = 0;
    int inferred_line = 0;
    std::size_t n_encoded = 0;
    for (const auto& rs : states_) {
      if (!rs.decl.encoding) continue;
      ++n_encoded;
      const unsigned w = rs.decl.encoding->width;
      if (spec_.register_width) {
        if (w != *spec_.register_width)
          diag("width-violation",
               "state '" + rs.decl.id + "' encoding width " + std::to_string(w) +
                   " does not match register width " +
                   std::to_string(*spec_.register_width),
               rs.line);
      } else if (inferred == 0) {
        inferred = w;
        inferred_line = rs.line;
      } else if (w != inferred) {
        diag("width-violation",
             "state '" + rs.decl.id + "' encoding width " + std::to_string(w) +
                 " does not match width " + std::to_string(inferred) + " from line " +
                 std::to_string(inferred_line),
             rs.line);
      }
    }
    if (!spec_.register_width && inferred != 0) spec_.register_width = inferred;
    if (n_encoded != 0 && n_encoded != states_.size())
      diag("partial-encoding", "only " + std::to_string(n_encoded) + " of " +
                                   std::to_string(states_.size()) + " states are encoded",
           0);
    if (spec_.register_width && *spec_.register_width < 64 &&
        (std::uint64_t{1} << *spec_.register_width) < states_.size())
      diag("width-violation",
           "register width " + std::to_string(*spec_.register_width) +
               " cannot encode " + std::to_string(states_.size()) + " states",
           have_width_ ? width_line_ : inferred_line);

    if (states_.empty() && have_fsm_) diag("syntax-error", "machine has no states", 0);

    const auto in_widths = [this] {
      std::map<std::string, unsigned> w;
      for (const auto& s : spec_.inputs) w[s.id] = s.width;
      return w;
    }();

    for (auto& rs : states_) {
      std::set<std::string> assigned;
      for (auto& a : rs.assigns) {
        if (!spec_.find_output(a.sig)) {
          diag("unknown-signal", "'" + a.sig + "' is not a declared output", a.line,
               a.sig_col);
          continue;
        }
        if (!assigned.insert(a.sig).second) {
          diag("duplicate-identifier",
               "state '" + rs.decl.id + "' assigns '" + a.sig + "' more than once", a.line,
               a.sig_col);
          continue;
        }
        Expr e = parse_checked(a.expr, a.line, a.expr_col);
        if (!e) continue;
        if (spec_.kind == FsmKind::Moore && references_any_signal(e)) {
          diag("moore-input-ref",
               "moore machine output '" + a.sig + "' cannot reference signals", a.line,
               a.expr_col);
          continue;
        }
        check_input_refs(e, "output '" + a.sig + "'", a.line, a.expr_col);
        rs.decl.outputs.emplace_back(a.sig, std::move(e));
      }
      spec_.states.push_back(std::move(rs.decl));
    }

    if (!have_reset_)
      diag("missing-reset", "no reset state declared", 0);
    else if (!spec_.reset_state.empty() && !spec_.find_state(spec_.reset_state))
      diag("missing-reset", "reset state '" + spec_.reset_state + "' is not a declared state",
           reset_line_);

    for (auto& t : trans_) {
      if (!spec_.find_state(t.from))
        diag("unknown-state", "transition leaves undeclared state '" + t.from + "'", t.line,
             t.from_col);
      if (!spec_.find_state(t.to))
        diag("unknown-state", "transition enters undeclared state '" + t.to + "'", t.line,
             t.to_col);
      Expr guard;
      if (t.guard.empty()) {
        guard = make_literal(1, 1);
      } else {
        guard = parse_checked(t.guard, t.line, t.guard_col);
        if (guard) {
          check_input_refs(guard, "guard", t.line, t.guard_col);
          try {
            const unsigned gw = expr_width(guard, in_widths);
            if (gw != 1)
              diag("width-violation",
                   "guard has width " + std::to_string(gw) + ", expected 1", t.line,
                   t.guard_col);
          } catch (const std::out_of_range&) {
            // unknown signal, reported above
          }
        }
      }
      if (!guard) continue;
      spec_.transitions.push_back({t.from, t.to, std::move(guard)});
    }
  }

  std::vector<std::string> lines_;
  std::vector<Diagnostic> diags_;
  FsmSpec spec_;
  bool have_fsm_ = false;
  bool seen_header_ = false;
  bool have_width_ = false;
  bool have_reset_ = false;
  int width_line_ = 0;
  int reset_line_ = 0;
  bool in_block_ = false;
  std::string block_state_;
  int block_line_ = 0;
  std::set<std::string> names_;
  std::vector<RawState> states_;
  std::vector<RawTrans> trans_;
};

}  // namespace

FsmSpec parse_fsm(std::string_view text) {
  return TextParser{}.run(text);
}

std::string serialize_fsm(const FsmSpec& spec) {
  std::ostringstream out;
  out << "fsm " << spec.name << ' ' << to_string(spec.kind) << '\n';
  if (spec.register_width) out << "width " << *spec.register_width << '\n';
  for (const auto& s : spec.inputs) out << "input " << s.id << ' ' << s.width << '\n';
  for (const auto& s : spec.outputs) out << "output " << s.id << ' ' << s.width << '\n';
  for (const auto& st : spec.states) {
    out << "state " << st.id;
    if (st.encoding) out << " encoding " << to_string(*st.encoding);
    if (st.is_protected) out << " protected";
    if (!st.outputs.empty()) {
      out << " {\n";
      for (const auto& [sig, expr] : st.outputs)
        out << "  " << sig << " = " << to_string(expr) << '\n';
      out << "}";
    }
    out << '\n';
  }
  if (!spec.reset_state.empty()) out << "reset " << spec.reset_state << '\n';
  for (const auto& t : spec.transitions)
    out << "trans " << t.from << " -> " << t.to << " when " << to_string(t.guard) << '\n';
  return out.str();
}

namespace {

// Shared shape checks for the JSON mirror; every problem becomes a diagnostic
// so the caller sees all of them at once.
class JsonReader {
 public:
  FsmSpec run(std::string_view text) {
    ordered_json j;
    try {
      j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError({"syntax-error", e.what()});
    }
    if (!j.is_object()) {
      throw ParseError({"syntax-error", "top-level JSON value must be an object"});
    }
    read(j);
    auto semantic = validate(spec_);
    diags_.insert(diags_.end(), semantic.begin(), semantic.end());
    if (!diags_.empty()) {
      std::string what = to_string(diags_.front());
      if (diags_.size() > 1)
        what += " (and " + std::to_string(diags_.size() - 1) + " more)";
      throw ParseError(what, diags_);
    }
    return spec_;
  }

 private:
  void diag(std::string code, std::string msg) {
    diags_.push_back({std::move(code), std::move(msg)});
  }

  std::string str_field(const ordered_json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) {
      diag("syntax-error", where + " is missing \"" + key + "\"");
      return {};
    }
    if (!j[key].is_string()) {
      diag("syntax-error", where + " field \"" + key + "\" must be a string");
      return {};
    }
    return j[key].get<std::string>();
  }

  Expr expr_field(const ordered_json& v, const std::string& where) {
    if (!v.is_string()) {
      diag("syntax-error", where + " must be an expression string");
      return nullptr;
    }
    try {
      return parse_expr(v.get<std::string>());
    } catch (const ParseError& e) {
      for (auto d : e.diagnostics()) {
        d.message = where + ": " + d.message;
        d.line = d.col = 0;
        diags_.push_back(std::move(d));
      }
      return nullptr;
    }
  }

  void read_signals(const ordered_json& j, const char* key, bool is_input) {
    if (!j.contains(key) || !j[key].is_array()) {
      diag("syntax-error", std::string("\"") + key + "\" must be an array");
      return;
    }
    for (const auto& s : j[key]) {
      if (!s.is_object()) {
        diag("syntax-error", std::string("entries of \"") + key + "\" must be objects");
        continue;
      }
      SignalDecl sig;
      sig.id = str_field(s, "id", std::string(key) + " entry");
      sig.direction = is_input ? SignalDirection::Input : SignalDirection::Output;
      if (s.contains("width")) {
        if (!s["width"].is_number_unsigned()) {
          diag("syntax-error", "signal '" + sig.id + "' width must be an unsigned number");
          continue;
        }
        sig.width = s["width"].get<unsigned>();
      }
      (is_input ? spec_.inputs : spec_.outputs).push_back(std::move(sig));
    }
  }

  void read_states(const ordered_json& j) {
    if (!j.contains("states") || !j["states"].is_array()) {
      diag("syntax-error", "\"states\" must be an array");
      return;
    }
    for (const auto& s : j["states"]) {
      if (!s.is_object()) {
        diag("syntax-error", "entries of \"states\" must be objects");
        continue;
      }
      StateDecl st;
      st.id = str_field(s, "id", "state entry");
      if (s.contains("protected")) {
        if (!s["protected"].is_boolean())
          diag("syntax-error", "state '" + st.id + "' \"protected\" must be a boolean");
        else
          st.is_protected = s["protected"].get<bool>();
      }
      if (s.contains("encoding") && !s["encoding"].is_null()) {
        Expr e = expr_field(s["encoding"], "state '" + st.id + "' encoding");
        if (e && e->kind == ExprNode::Kind::Literal)
          st.encoding = e->literal;
        else if (e)
          diag("syntax-error", "state '" + st.id + "' encoding must be a literal");
      }
      if (s.contains("outputs")) {
        if (!s["outputs"].is_object()) {
          diag("syntax-error", "state '" + st.id + "' \"outputs\" must be an object");
        } else {
          for (const auto& [sig, v] : s["outputs"].items()) {
            Expr e = expr_field(v, "state '" + st.id + "' output '" + sig + "'");
            if (e) st.outputs.emplace_back(sig, std::move(e));
          }
        }
      }
      spec_.states.push_back(std::move(st));
    }
  }

  void read_transitions(const ordered_json& j) {
    if (!j.contains("transitions") || !j["transitions"].is_array()) {
      diag("syntax-error", "\"transitions\" must be an array");
      return;
    }
    for (const auto& t : j["transitions"]) {
      if (!t.is_object()) {
        diag("syntax-error", "entries of \"transitions\" must be objects");
        continue;
      }
      TransitionDecl tr;
      tr.from = str_field(t, "from", "transition");
      tr.to = str_field(t, "to", "transition");
      if (t.contains("guard"))
        tr.guard = expr_field(t["guard"], "transition " + tr.from + " -> " + tr.to + " guard");
      else
        tr.guard = make_literal(1, 1);
      if (tr.guard) spec_.transitions.push_back(std::move(tr));
    }
  }

  void read(const ordered_json& j) {
    spec_.name = str_field(j, "name", "machine");
    const std::string kind = str_field(j, "kind", "machine");
    if (kind == "mealy")
      spec_.kind = FsmKind::Mealy;
    else if (kind == "moore")
      spec_.kind = FsmKind::Moore;
    else if (!kind.empty())
      diag("syntax-error", "machine kind must be 'mealy' or 'moore'");
    if (j.contains("register_width")) {
      if (!j["register_width"].is_number_unsigned())
        diag("syntax-error", "\"register_width\" must be an unsigned number");
      else
        spec_.register_width = j["register_width"].get<unsigned>();
    }
    read_signals(j, "inputs", true);
    read_signals(j, "outputs", false);
    read_states(j);
    spec_.reset_state = str_field(j, "reset_state", "machine");
    read_transitions(j);

    if (!spec_.register_width) {
      unsigned inferred = 0;
      bool uniform = true;
      for (const auto& st : spec_.states) {
        if (!st.encoding) continue;
        if (inferred == 0)
          inferred = st.encoding->width;
        else if (st.encoding->width != inferred)
          uniform = false;
      }
      if (inferred != 0 && uniform) spec_.register_width = inferred;
    }
  }

  FsmSpec spec_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

FsmSpec parse_fsm_json(std::string_view text) {
  return JsonReader{}.run(text);
}

std::string serialize_fsm_json(const FsmSpec& spec) {
  ordered_json j;
  j["name"] = spec.name;
  j["kind"] = to_string(spec.kind);
  if (spec.register_width) j["register_width"] = *spec.register_width;
  j["inputs"] = ordered_json::array();
  for (const auto& s : spec.inputs)
    j["inputs"].push_back({{"id", s.id}, {"width", s.width}});
  j["outputs"] = ordered_json::array();
  for (const auto& s : spec.outputs)
    j["outputs"].push_back({{"id", s.id}, {"width", s.width}});
  j["states"] = ordered_json::array();
  for (const auto& st : spec.states) {
    ordered_json s;
    s["id"] = st.id;
    if (st.encoding) s["encoding"] = to_string(*st.encoding);
    s["protected"] = st.is_protected;
    ordered_json outs = ordered_json::object();
    for (const auto& [sig, expr] : st.outputs) outs[sig] = to_string(expr);
    s["outputs"] = std::move(outs);
    j["states"].push_back(std::move(s));
  }
  j["reset_state"] = spec.reset_state;
  j["transitions"] = ordered_json::array();
  for (const auto& t : spec.transitions)
    j["transitions"].push_back(
        {{"from", t.from}, {"to", t.to}, {"guard", to_string(t.guard)}});
  return j.dump(2) + "\n";
}

FsmSpec parse_fsm_auto(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? parse_fsm_json(text) : parse_fsm(text);
  }
  throw ParseError({"syntax-error", "empty input"});
}

}  // namespace fsmguard
