#include "fsmguard/injection.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "fsmguard/detectors.hpp"
#include "fsmguard/graph.hpp"
#include "fsmguard/hash.hpp"
#include "fsmguard/rng.hpp"
#include "fsmguard/verilog_render.hpp"

namespace fsmguard {

const char* to_string(InjectionClass c) {
  switch (c) {
    case InjectionClass::Coding: return "coding";
    case InjectionClass::Structural: return "structural";
    case InjectionClass::Potential: return "potential";
  }
  return "?";
}

std::optional<InjectionClass> injection_class_from(const std::string& name) {
  if (name == "coding") return InjectionClass::Coding;
  if (name == "structural") return InjectionClass::Structural;
  if (name == "potential") return InjectionClass::Potential;
  return std::nullopt;
}

const std::vector<InjectionVariant>& injection_variants() {
  static const std::vector<InjectionVariant> variants = {
      {"dead-state", InjectionClass::Structural, "DEAD_STATE_NO_INCOMING"},
      {"dont-care", InjectionClass::Potential, "DONT_CARE_STATES"},
      {"duplicate-encoding", InjectionClass::Potential, "DUPLICATE_ENCODING"},
      {"missing-default", InjectionClass::Coding, "LINT_MISSING_DEFAULT"},
      {"overflow-output", InjectionClass::Coding, "OVERFLOW_OUTPUT"},
      {"remove-reset-incoming", InjectionClass::Structural, "MISSING_RESET_COVERAGE"},
      {"weak-hamming", InjectionClass::Potential, "WEAK_HAMMING"},
  };
  return variants;
}

const InjectionVariant* find_variant(const std::string& name) {
  for (const auto& v : injection_variants())
    if (name == v.name) return &v;
  return nullptr;
}

namespace {

std::string unique_state_id(const FsmSpec& spec, const std::string& base) {
  auto taken = [&spec](const std::string& id) {
    if (spec.find_state(id) || spec.find_input(id) || spec.find_output(id)) return true;
    return false;
  };
  if (!taken(base)) return base;
  for (int i = 2;; ++i) {
    const std::string candidate = base + std::to_string(i);
    if (!taken(candidate)) return candidate;
  }
}

bool any_encoded(const FsmSpec& spec) {
  return std::any_of(spec.states.begin(), spec.states.end(),
                     [](const StateDecl& s) { return s.encoding.has_value(); });
}

// Gives every state a distinct encoding of the given width.
void assign_sequential_encodings(FsmSpec& spec, unsigned width,
                                 std::vector<std::string>& edits) {
  for (std::size_t i = 0; i < spec.states.size(); ++i)
    spec.states[i].encoding = BitVector{i, width};
  spec.register_width = width;
  edits.push_back("assigned sequential " + std::to_string(width) +
                  "-bit encodings to all states");
}

void widen_encodings(FsmSpec& spec, unsigned new_width, std::vector<std::string>& edits) {
  for (auto& st : spec.states)
    if (st.encoding) st.encoding->width = new_width;
  spec.register_width = new_width;
  edits.push_back("widened the state register to " + std::to_string(new_width) + " bits");
}

std::string pair_in_declaration_order(const FsmSpec& spec, std::size_t a, std::size_t b) {
  const std::size_t i = std::min(a, b);
  const std::size_t j = std::max(a, b);
  return pair_location(spec.states[i].id, spec.states[j].id);
}

std::pair<std::size_t, std::size_t> distinct_pair(Rng& rng, std::size_t n) {
  const std::size_t a = rng.index(n);
  std::size_t b = rng.index(n - 1);
  if (b >= a) ++b;
  return {a, b};
}

void inject_dead_state(FsmSpec& spec, Rng& rng, GroundTruth& truth,
                       std::vector<std::string>& edits) {
  const std::size_t n = spec.states.size();
  StateDecl st;
  st.id = unique_state_id(spec, "ORPHAN");

  if (any_encoded(spec)) {
    unsigned w = *spec.register_width;
    std::set<std::uint64_t> used;
    for (const auto& s : spec.states)
      if (s.encoding) used.insert(s.encoding->value);
    std::vector<std::uint64_t> free_values;
    if (w < 16) {
      for (std::uint64_t v = 0; v < (std::uint64_t{1} << w); ++v)
        if (!used.count(v)) free_values.push_back(v);
    }
    if (free_values.empty()) {
      if (w >= 64) throw std::invalid_argument("no room to encode an extra state");
      widen_encodings(spec, w + 1, edits);
      st.encoding = BitVector{(std::uint64_t{1} << w) | 0, w + 1};
    } else {
      st.encoding = BitVector{free_values[rng.index(free_values.size())], w};
    }
  }

  const std::string target = spec.states[rng.index(n)].id;
  spec.states.push_back(st);
  spec.transitions.push_back({st.id, target, make_literal(1, 1)});
  edits.push_back("added state '" + st.id + "' with one outgoing transition to '" +
                  target + "' and no incoming transitions");
  truth.location = st.id;
}

void ensure_dont_cares(FsmSpec& spec, std::vector<std::string>& edits) {
  const std::size_t n = spec.states.size();
  if (spec.register_width && *spec.register_width < 64 &&
      (std::uint64_t{1} << *spec.register_width) > n)
    return;
  if (spec.register_width) {
    widen_encodings(spec, *spec.register_width + 1, edits);
  } else {
    unsigned w = min_register_width(n);
    if ((std::uint64_t{1} << w) == n) ++w;
    spec.register_width = w;
    edits.push_back("declared a " + std::to_string(w) + "-bit state register");
  }
}

void inject_remove_reset_incoming(FsmSpec& spec, GroundTruth& truth,
                                  std::vector<std::string>& edits) {
  ensure_dont_cares(spec, edits);
  std::vector<TransitionDecl> kept;
  for (const auto& t : spec.transitions) {
    if (t.to == spec.reset_state && t.from != spec.reset_state) {
      edits.push_back("removed transition " + t.from + " -> " + t.to);
      continue;
    }
    kept.push_back(t);
  }
  spec.transitions = std::move(kept);
  truth.location = "machine";
}

void inject_weak_hamming(FsmSpec& spec, Rng& rng, GroundTruth& truth,
                         std::vector<std::string>& edits) {
  const std::size_t n = spec.states.size();
  if (n < 2) throw std::invalid_argument("weak-hamming needs at least two states");
  if (!any_encoded(spec))
    assign_sequential_encodings(spec, min_register_width(n) + 1, edits);
  const unsigned w = *spec.register_width;

  const auto [a, b] = distinct_pair(rng, n);
  const std::uint64_t flipped =
      spec.states[b].encoding->value ^ (std::uint64_t{1} << rng.index(w));
  spec.states[a].encoding = BitVector{flipped, w};
  spec.states[a].is_protected = true;
  edits.push_back("marked state '" + spec.states[a].id + "' protected and re-encoded it to " +
                  to_string(*spec.states[a].encoding) + ", hamming distance 1 from '" +
                  spec.states[b].id + "'");
  truth.location = pair_in_declaration_order(spec, a, b);
}

void inject_duplicate_encoding(FsmSpec& spec, Rng& rng, GroundTruth& truth,
                               std::vector<std::string>& edits) {
  const std::size_t n = spec.states.size();
  if (n < 2) throw std::invalid_argument("duplicate-encoding needs at least two states");
  if (!any_encoded(spec))
    assign_sequential_encodings(spec, min_register_width(n), edits);

  const auto [a, b] = distinct_pair(rng, n);
  spec.states[a].encoding = spec.states[b].encoding;
  edits.push_back("re-encoded state '" + spec.states[a].id + "' to " +
                  to_string(*spec.states[a].encoding) + ", the encoding of '" +
                  spec.states[b].id + "'");
  truth.location = pair_in_declaration_order(spec, a, b);
}

void inject_dont_care(FsmSpec& spec, GroundTruth& truth, std::vector<std::string>& edits) {
  if (spec.register_width) {
    if (*spec.register_width >= 64)
      throw std::invalid_argument("state register is already 64 bits wide");
    widen_encodings(spec, *spec.register_width + 1, edits);
  } else {
    ensure_dont_cares(spec, edits);
  }
  truth.location = "machine";
}

void inject_overflow_output(FsmSpec& spec, Rng& rng, GroundTruth& truth,
                            std::vector<std::string>& edits) {
  if (spec.outputs.empty())
    throw std::invalid_argument("overflow-output needs at least one output");
  const std::size_t s = rng.index(spec.states.size());
  const std::size_t o = rng.index(spec.outputs.size());
  const auto& out = spec.outputs[o];

  const std::uint64_t cap = out.width >= 63 ? UINT64_MAX / 2 : (std::uint64_t{1} << out.width);
  const Expr expr = make_binary(BinaryOp::Add, make_literal(rng.below(cap), out.width),
                                make_literal(rng.below(cap), out.width));

  auto& st = spec.states[s];
  bool replaced = false;
  for (auto& [sig, e] : st.outputs) {
    if (sig == out.id) {
      e = expr;
      replaced = true;
      break;
    }
  }
  if (!replaced) st.outputs.emplace_back(out.id, expr);
  edits.push_back(std::string(replaced ? "replaced" : "added") + " output '" + out.id +
                  "' in state '" + st.id + "' with '" + to_string(expr) +
                  "', whose arithmetic is wider than the output");
  truth.location = st.id + "." + out.id;
}

void inject_missing_default(const FsmSpec& spec, InjectionResult& result) {
  RenderOptions opts;
  opts.include_default = false;
  const std::string text = render_verilog(spec, opts);

  int lineno = 0, hit = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    ++lineno;
    const auto end = text.find('\n', pos);
    const std::string line = text.substr(pos, end == std::string::npos ? end : end - pos);
    if (line.find("case (state)") != std::string::npos) {
      hit = lineno;
      break;
    }
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  if (hit == 0) throw std::logic_error("rendered module has no next-state case");

  char buf[32];
  std::snprintf(buf, sizeof buf, "line:%04d", hit);
  result.verilog = text;
  result.edits.push_back("rendered the module without a default arm in the next-state case");
  result.truth.location = buf;
}

}  // namespace

InjectionResult inject(const FsmSpec& clean, const InjectionRecipe& recipe) {
  const InjectionVariant* variant = find_variant(recipe.variant);
  if (!variant) throw std::invalid_argument("unknown injection variant '" + recipe.variant + "'");
  if (variant->klass != recipe.klass)
    throw std::invalid_argument("variant '" + recipe.variant + "' belongs to class '" +
                                to_string(variant->klass) + "'");
  if (auto diags = validate(clean); !diags.empty())
    throw std::invalid_argument("cannot inject into an invalid machine: " +
                                to_string(diags.front()));

  InjectionResult result;
  result.spec = clean;
  result.truth.detector_id = variant->detector_id;
  result.truth.recipe = recipe;

  Rng rng(recipe.seed ^ fnv1a_64(recipe.variant));
  const std::string name = recipe.variant;
  if (name == "dead-state") {
    inject_dead_state(result.spec, rng, result.truth, result.edits);
  } else if (name == "remove-reset-incoming") {
    inject_remove_reset_incoming(result.spec, result.truth, result.edits);
  } else if (name == "weak-hamming") {
    inject_weak_hamming(result.spec, rng, result.truth, result.edits);
  } else if (name == "duplicate-encoding") {
    inject_duplicate_encoding(result.spec, rng, result.truth, result.edits);
  } else if (name == "dont-care") {
    inject_dont_care(result.spec, result.truth, result.edits);
  } else if (name == "overflow-output") {
    inject_overflow_output(result.spec, rng, result.truth, result.edits);
  } else if (name == "missing-default") {
    inject_missing_default(result.spec, result);
  }

  if (auto diags = validate(result.spec); !diags.empty())
    throw std::logic_error("injection produced an invalid machine: " +
                           to_string(diags.front()));
  return result;
}

FsmSpec generate_random_spec(std::uint64_t seed) {
  for (unsigned attempt = 0; attempt < 8; ++attempt) {
    Rng rng(seed + attempt * 0x9E3779B97F4A7C15ULL);
    FsmSpec spec;
    spec.name = "m" + std::to_string(seed);
    spec.kind = rng.coin() ? FsmKind::Mealy : FsmKind::Moore;

    const std::size_t n = 3 + rng.index(6);
    const std::size_t ni = 1 + rng.index(3);
    const std::size_t no = 1 + rng.index(2);
    for (std::size_t i = 0; i < ni; ++i)
      spec.inputs.push_back({"in" + std::to_string(i),
                             static_cast<unsigned>(1 + rng.index(4)),
                             SignalDirection::Input});
    for (std::size_t i = 0; i < no; ++i)
      spec.outputs.push_back({"out" + std::to_string(i),
                              static_cast<unsigned>(1 + rng.index(4)),
                              SignalDirection::Output});

    auto random_guard = [&rng, &spec] {
      const auto& in = spec.inputs[rng.index(spec.inputs.size())];
      const std::uint64_t v = rng.below(std::uint64_t{1} << in.width);
      return make_binary(BinaryOp::Eq, make_signal(in.id), make_literal(v, in.width));
    };

    for (std::size_t i = 0; i < n; ++i) {
      StateDecl st;
      st.id = "S" + std::to_string(i);
      for (const auto& out : spec.outputs) {
        Expr value;
        std::vector<const SignalDecl*> matching;
        for (const auto& in : spec.inputs)
          if (in.width == out.width) matching.push_back(&in);
        if (spec.kind == FsmKind::Mealy && !matching.empty() && rng.coin())
          value = make_signal(matching[rng.index(matching.size())]->id);
        else
          value = make_literal(rng.below(std::uint64_t{1} << out.width), out.width);
        st.outputs.emplace_back(out.id, value);
      }
      spec.states.push_back(std::move(st));
    }
    spec.reset_state = "S0";

    for (std::size_t i = 0; i < n; ++i)
      spec.transitions.push_back(
          {"S" + std::to_string(i), "S" + std::to_string((i + 1) % n), random_guard()});
    const std::size_t extra = rng.index(n);
    for (std::size_t i = 0; i < extra; ++i)
      spec.transitions.push_back({"S" + std::to_string(rng.index(n)),
                                  "S" + std::to_string(rng.index(n)), random_guard()});

    if (pre_analyze(build_graph(spec)).empty()) return spec;
  }
  throw std::logic_error("no clean machine found for seed " + std::to_string(seed));
}

}  // namespace fsmguard
