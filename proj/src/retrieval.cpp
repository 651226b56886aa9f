#include "fsmguard/retrieval.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fsmguard {
namespace {

enum class RuleVerdict { True, False, Indecisive };

struct RuleEval {
  RuleVerdict verdict = RuleVerdict::Indecisive;
  std::string note;
};

std::optional<std::pair<std::string, std::string>> parse_pair(const std::string& loc) {
  if (loc.size() < 5 || loc.front() != '(' || loc.back() != ')') return std::nullopt;
  const auto comma = loc.find(',');
  if (comma == std::string::npos) return std::nullopt;
  return std::make_pair(loc.substr(1, comma - 1), loc.substr(comma + 1, loc.size() - comma - 2));
}

std::optional<std::size_t> parse_transition(const std::string& loc) {
  const std::string prefix = "transition:";
  if (loc.rfind(prefix, 0) != 0) return std::nullopt;
  const std::string digits = loc.substr(prefix.size());
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  return std::stoul(digits);
}

RuleEval eval_output_expr_arithmetic(const SecurityStateGraph& g, const Finding& f) {
  const auto dot = f.location.find('.');
  if (dot == std::string::npos)
    return {RuleVerdict::Indecisive, "location '" + f.location + "' is not <state>.<output>"};
  const auto idx = g.index_of(f.location.substr(0, dot));
  if (!idx) return {RuleVerdict::Indecisive, "state in '" + f.location + "' not found"};
  const std::string sig = f.location.substr(dot + 1);

  std::map<std::string, unsigned> in_w;
  for (const auto& s : g.inputs) in_w[s.id] = s.width;
  unsigned declared = 0;
  for (const auto& s : g.outputs)
    if (s.id == sig) declared = s.width;
  if (declared == 0) return {RuleVerdict::Indecisive, "output in '" + f.location + "' not found"};

  for (const auto& [name, expr] : g.nodes[*idx].outputs) {
    if (name != sig) continue;
    return {max_arith_width(expr, in_w) > declared ? RuleVerdict::True : RuleVerdict::False,
            ""};
  }
  return {RuleVerdict::Indecisive, "state has no assignment for '" + sig + "'"};
}

RuleEval eval_pair_distance(const SecurityStateGraph& g, const Finding& f,
                            const ConfirmRule& rule) {
  const auto pair = parse_pair(f.location);
  if (!pair) return {RuleVerdict::Indecisive, "location '" + f.location + "' is not a pair"};
  const auto a = g.index_of(pair->first);
  const auto b = g.index_of(pair->second);
  if (!a || !b) return {RuleVerdict::Indecisive, "pair in '" + f.location + "' not found"};
  const auto& ea = g.nodes[*a].encoding;
  const auto& eb = g.nodes[*b].encoding;
  if (!ea || !eb) return {RuleVerdict::Indecisive, "pair in '" + f.location + "' lacks encodings"};
  if (ea->width != eb->width)
    return {RuleVerdict::Indecisive, "pair in '" + f.location + "' has mixed widths"};
  const unsigned threshold = static_cast<unsigned>(std::stoul(rule.params.at("threshold")));
  return {hamming_distance(*ea, *eb) < threshold ? RuleVerdict::True : RuleVerdict::False, ""};
}

RuleEval eval_dont_care_positive(const SecurityStateGraph& g) {
  if (!g.register_width) return {RuleVerdict::False, ""};
  if (*g.register_width >= 64) return {RuleVerdict::True, ""};
  const bool any = (std::uint64_t{1} << *g.register_width) > g.nodes.size();
  return {any ? RuleVerdict::True : RuleVerdict::False, ""};
}

RuleEval eval_always_true_guard(const SecurityStateGraph& g, const Finding& f) {
  const auto idx = parse_transition(f.location);
  if (!idx) return {RuleVerdict::Indecisive, "location '" + f.location + "' is not a transition"};
  if (*idx >= g.edges.size())
    return {RuleVerdict::Indecisive, "transition index in '" + f.location + "' out of range"};
  const auto& e = g.edges[*idx];
  const bool hit = !references_any_signal(e.guard) && g.nodes[e.to].is_protected &&
                   !g.nodes[e.from].is_protected;
  return {hit ? RuleVerdict::True : RuleVerdict::False, ""};
}

RuleEval eval_rule(const ConfirmRule& rule, const SecurityStateGraph& g, const Finding& f) {
  try {
    switch (rule.kind) {
      case ConfirmKind::OutputExprArithmetic:
        return eval_output_expr_arithmetic(g, f);
      case ConfirmKind::EncodingPairDistanceBelow:
        return eval_pair_distance(g, f, rule);
      case ConfirmKind::DontCareCountPositive:
        return eval_dont_care_positive(g);
      case ConfirmKind::AlwaysTrueGuardIntoProtected:
        return eval_always_true_guard(g, f);
      case ConfirmKind::Custom:
        return {RuleVerdict::Indecisive, "manual confirmation required"};
    }
  } catch (const std::exception& e) {
    return {RuleVerdict::Indecisive, e.what()};
  }
  return {RuleVerdict::Indecisive, ""};
}

}  // namespace

std::vector<EvaluatedFinding> confirm_potential(const std::vector<Finding>& findings,
                                                const SecurityStateGraph& g,
                                                const KnowledgeGraph& kg) {
  std::vector<EvaluatedFinding> out;
  out.reserve(findings.size());
  for (const auto& f : findings) {
    EvaluatedFinding ev{f, ""};
    if (f.phase == Phase::Structural) {
      ev.finding.status = FindingStatus::Confirmed;
      out.push_back(std::move(ev));
      continue;
    }

    const auto rules = confirm_rules(kg, f.vuln_id);
    const ConfirmRule* confirmed_by = nullptr;
    const ConfirmRule* refuted_by = nullptr;
    bool any_indecisive = false;
    std::string first_note;
    for (const auto& rule : rules) {
      const RuleEval r = eval_rule(rule, g, ev.finding);
      if (r.verdict == RuleVerdict::True) {
        confirmed_by = &rule;
        break;
      }
      if (r.verdict == RuleVerdict::False && !refuted_by) refuted_by = &rule;
      if (r.verdict == RuleVerdict::Indecisive) {
        any_indecisive = true;
        if (first_note.empty()) first_note = r.note;
      }
    }

    if (confirmed_by) {
      ev.finding.status = FindingStatus::Confirmed;
      ev.note = confirmed_by->positive_text;
    } else if (any_indecisive || rules.empty()) {
      ev.finding.status = FindingStatus::Unconfirmed;
      ev.note = rules.empty() ? "no confirmation rules for '" + f.vuln_id + "'" : first_note;
    } else if (refuted_by) {
      ev.finding.status = FindingStatus::Refuted;
      ev.note = refuted_by->negative_text;
    } else {
      ev.finding.status = FindingStatus::Unconfirmed;
    }
    out.push_back(std::move(ev));
  }
  return out;
}

std::vector<Finding> strip_notes(const std::vector<EvaluatedFinding>& evaluated) {
  std::vector<Finding> out;
  out.reserve(evaluated.size());
  for (const auto& ev : evaluated) out.push_back(ev.finding);
  return out;
}

RetrievalResult retrieve_knowledge(const std::vector<EvaluatedFinding>& evaluated,
                                   const KnowledgeGraph& kg) {
  RetrievalResult result;

  std::map<std::string, KnowledgeItem> items;
  std::map<std::string, bool> any_confirmed;
  for (const auto& ev : evaluated) {
    const auto& f = ev.finding;
    if (f.status == FindingStatus::Refuted) {
      result.refuted.push_back(ev);
      continue;
    }
    auto& item = items[f.vuln_id];
    if (item.vuln_id.empty()) {
      item.vuln_id = f.vuln_id;
      item.knowledge = query_vuln(kg, f.vuln_id);
    }
    item.findings.push_back(f);
    any_confirmed[f.vuln_id] =
        any_confirmed[f.vuln_id] || f.status == FindingStatus::Confirmed;
  }

  for (auto& [vuln_id, item] : items) {
    std::set<std::string> markers;
    bool codegen = false;
    if (!item.knowledge) {
      markers.insert("no-knowledge");
    } else {
      if (!any_confirmed[vuln_id]) markers.insert("unconfirmed-caveat");
      if (item.knowledge->stage == "coding")
        codegen = any_confirmed[vuln_id];
      else if (item.knowledge->stage != "design")
        markers.insert("unknown-stage");
    }
    item.markers.assign(markers.begin(), markers.end());
    sort_findings(item.findings);
    result.report_items.push_back(item);
    if (codegen) result.codegen_items.push_back(std::move(item));
  }

  std::sort(result.refuted.begin(), result.refuted.end(),
            [](const EvaluatedFinding& a, const EvaluatedFinding& b) {
              return finding_less(a.finding, b.finding);
            });
  return result;
}

}  // namespace fsmguard
