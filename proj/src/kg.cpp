#include "fsmguard/kg.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace fsmguard {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<KgNodeType, const char*>, 14> kTypeNames = {{
    {KgNodeType::Vulnerability, "Vulnerability"},
    {KgNodeType::Stage, "stage"},
    {KgNodeType::Type, "type"},
    {KgNodeType::Check, "Check"},
    {KgNodeType::Consequence, "Consequence"},
    {KgNodeType::GoodExample, "GoodExample"},
    {KgNodeType::BadExample, "BadExample"},
    {KgNodeType::Suggestions, "suggestions"},
    {KgNodeType::Manner, "manner"},
    {KgNodeType::Confirm, "confirm"},
    {KgNodeType::ConfirmPositive, "confirm_positive"},
    {KgNodeType::ConfirmNegative, "confirm_negative"},
    {KgNodeType::PositiveExample, "positive_example"},
    {KgNodeType::NegativeExample, "negative_example"},
}};

constexpr std::array<std::pair<ConfirmKind, const char*>, 5> kKindNames = {{
    {ConfirmKind::OutputExprArithmetic, "output-expr-arithmetic"},
    {ConfirmKind::EncodingPairDistanceBelow, "encoding-pair-distance-below"},
    {ConfirmKind::DontCareCountPositive, "dont-care-count-positive"},
    {ConfirmKind::AlwaysTrueGuardIntoProtected, "always-true-guard-into-protected"},
    {ConfirmKind::Custom, "custom"},
}};

// Which child roles each role may point at.
const std::set<KgNodeType>* allowed_children(KgNodeType t) {
  static const std::set<KgNodeType> vuln = {
      KgNodeType::Stage,       KgNodeType::Type,       KgNodeType::Check,
      KgNodeType::Consequence, KgNodeType::GoodExample, KgNodeType::BadExample,
      KgNodeType::Suggestions, KgNodeType::Confirm};
  static const std::set<KgNodeType> suggestions = {KgNodeType::Manner};
  static const std::set<KgNodeType> confirm = {KgNodeType::ConfirmPositive,
                                               KgNodeType::ConfirmNegative};
  static const std::set<KgNodeType> positive = {KgNodeType::PositiveExample};
  static const std::set<KgNodeType> negative = {KgNodeType::NegativeExample};
  static const std::set<KgNodeType> none;
  switch (t) {
    case KgNodeType::Vulnerability: return &vuln;
    case KgNodeType::Suggestions: return &suggestions;
    case KgNodeType::Confirm: return &confirm;
    case KgNodeType::ConfirmPositive: return &positive;
    case KgNodeType::ConfirmNegative: return &negative;
    default: return &none;
  }
}

}  // namespace

const char* to_string(KgNodeType t) {
  for (const auto& [k, name] : kTypeNames)
    if (k == t) return name;
  return "?";
}

std::optional<KgNodeType> kg_node_type_from(const std::string& name) {
  for (const auto& [k, n] : kTypeNames)
    if (name == n) return k;
  return std::nullopt;
}

const char* to_string(ConfirmKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::optional<ConfirmKind> confirm_kind_from(const std::string& name) {
  for (const auto& [kind, n] : kKindNames)
    if (name == n) return kind;
  return std::nullopt;
}

std::vector<const KgNode*> KnowledgeGraph::children(const std::string& from,
                                                    const char* label) const {
  std::vector<const KgNode*> out;
  for (const auto& e : edges) {
    if (e.from != from || e.label != label) continue;
    auto it = nodes.find(e.to);
    if (it != nodes.end()) out.push_back(&it->second);
  }
  return out;
}

const KgNode* KnowledgeGraph::first_child(const std::string& from, const char* label) const {
  auto kids = children(from, label);
  return kids.empty() ? nullptr : kids.front();
}

std::vector<Diagnostic> validate_kg(const KnowledgeGraph& g) {
  std::vector<Diagnostic> out;

  bool any_vuln = false;
  for (const auto& [id, node] : g.nodes)
    if (node.type == KgNodeType::Vulnerability) any_vuln = true;
  if (!any_vuln) out.push_back({"no-vulnerability-nodes", "graph has no Vulnerability nodes"});

  std::set<std::string> referenced;
  for (const auto& e : g.edges) {
    const auto from = g.nodes.find(e.from);
    const auto to = g.nodes.find(e.to);
    if (from == g.nodes.end()) {
      out.push_back({"unknown-endpoint",
                     "edge (" + e.from + ", " + e.label + ", " + e.to +
                         ") starts at an undeclared node"});
      continue;
    }
    if (to == g.nodes.end()) {
      out.push_back({"unknown-endpoint",
                     "edge (" + e.from + ", " + e.label + ", " + e.to +
                         ") ends at an undeclared node"});
      continue;
    }
    referenced.insert(e.to);
    const auto label_type = kg_node_type_from(e.label);
    if (!label_type) {
      out.push_back({"edge-type-violation",
                     "edge label '" + e.label + "' is not a node role"});
      continue;
    }
    if (*label_type != to->second.type) {
      out.push_back({"edge-type-violation",
                     "edge (" + e.from + ", " + e.label + ", " + e.to +
                         ") points at a " + to_string(to->second.type) + " node"});
      continue;
    }
    const auto* allowed = allowed_children(from->second.type);
    if (!allowed->count(*label_type))
      out.push_back({"edge-type-violation",
                     std::string(to_string(from->second.type)) + " node '" + e.from +
                         "' cannot have a " + e.label + " child"});
  }

  for (const auto& [id, node] : g.nodes) {
    if (node.type == KgNodeType::Vulnerability) {
      for (const char* label_name : {"stage", "type", "Check", "suggestions"}) {
        if (g.children(id, label_name).empty())
          out.push_back({"missing-mandatory-edge",
                         "Vulnerability '" + id + "' has no " + label_name + " child"});
      }
    } else if (!referenced.count(id)) {
      out.push_back({"orphan-node",
                     std::string(to_string(node.type)) + " node '" + id +
                         "' is referenced by no edge"});
    }

    if (node.type == KgNodeType::Confirm) {
      const auto kind = confirm_kind_from(node.payload);
      if (!kind) {
        out.push_back({"bad-confirm-params",
                       "confirm node '" + id + "' names unknown predicate '" +
                           node.payload + "'"});
      } else if (*kind == ConfirmKind::EncodingPairDistanceBelow) {
        auto it = node.attrs.find("threshold");
        bool ok = it != node.attrs.end() && !it->second.empty() &&
                  std::all_of(it->second.begin(), it->second.end(),
                              [](char c) { return c >= '0' && c <= '9'; }) &&
                  it->second.size() <= 2 && it->second != "0";
        if (!ok)
          out.push_back({"bad-confirm-params",
                         "confirm node '" + id +
                             "' needs a positive integer 'threshold' attribute"});
      }
      for (const char* branch : {"confirm_positive", "confirm_negative"}) {
        if (g.children(id, branch).empty())
          out.push_back({"missing-mandatory-edge",
                         "confirm node '" + id + "' has no " + branch + " child"});
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return a.code != b.code ? a.code < b.code : a.message < b.message;
  });
  return out;
}

KnowledgeGraph load_kg(const std::string& text) {
  std::vector<Diagnostic> diags;
  KnowledgeGraph g;

  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError({"syntax-error", e.what()});
  }
  if (!j.is_object()) throw ParseError({"syntax-error", "knowledge graph must be a JSON object"});

  if (j.contains("version")) {
    if (j["version"].is_string())
      g.version = j["version"].get<std::string>();
    else
      diags.push_back({"syntax-error", "\"version\" must be a string"});
  }

  if (!j.contains("nodes") || !j["nodes"].is_array()) {
    diags.push_back({"syntax-error", "\"nodes\" must be an array"});
  } else {
    for (const auto& n : j["nodes"]) {
      if (!n.is_object() || !n.contains("id") || !n["id"].is_string() ||
          !n.contains("type") || !n["type"].is_string()) {
        diags.push_back({"syntax-error",
                         "every node needs string \"id\" and \"type\" fields"});
        continue;
      }
      KgNode node;
      node.id = n["id"].get<std::string>();
      const std::string type_name = n["type"].get<std::string>();
      const auto type = kg_node_type_from(type_name);
      if (!type) {
        diags.push_back({"unknown-node-type",
                         "node '" + node.id + "' has unknown type '" + type_name + "'"});
        continue;
      }
      node.type = *type;
      if (n.contains("payload")) {
        if (n["payload"].is_string())
          node.payload = n["payload"].get<std::string>();
        else
          diags.push_back({"syntax-error", "node '" + node.id + "' payload must be a string"});
      }
      if (n.contains("attrs")) {
        if (!n["attrs"].is_object()) {
          diags.push_back({"syntax-error", "node '" + node.id + "' attrs must be an object"});
        } else {
          for (const auto& [k, v] : n["attrs"].items()) {
            if (!v.is_string()) {
              diags.push_back({"syntax-error",
                               "node '" + node.id + "' attr '" + k + "' must be a string"});
              continue;
            }
            node.attrs[k] = v.get<std::string>();
          }
        }
      }
      if (!g.nodes.emplace(node.id, std::move(node)).second)
        diags.push_back({"duplicate-id", "duplicate node id '" + n["id"].get<std::string>() + "'"});
    }
  }

  if (!j.contains("edges") || !j["edges"].is_array()) {
    diags.push_back({"syntax-error", "\"edges\" must be an array"});
  } else {
    for (const auto& e : j["edges"]) {
      if (!e.is_object() || !e.contains("from") || !e["from"].is_string() ||
          !e.contains("label") || !e["label"].is_string() || !e.contains("to") ||
          !e["to"].is_string()) {
        diags.push_back({"syntax-error",
                         "every edge needs string \"from\", \"label\", \"to\" fields"});
        continue;
      }
      g.edges.push_back({e["from"].get<std::string>(), e["label"].get<std::string>(),
                         e["to"].get<std::string>()});
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

  auto semantic = validate_kg(g);
  diags.insert(diags.end(), semantic.begin(), semantic.end());
  if (!diags.empty()) {
    std::string what = to_string(diags.front());
    if (diags.size() > 1) what += " (and " + std::to_string(diags.size() - 1) + " more)";
    throw ParseError(what, diags);
  }
  return g;
}

std::string serialize_kg(const KnowledgeGraph& g) {
  ordered_json j;
  j["version"] = g.version;
  j["nodes"] = ordered_json::array();
  for (const auto& [id, node] : g.nodes) {
    ordered_json n;
    n["id"] = node.id;
    n["type"] = to_string(node.type);
    n["payload"] = node.payload;
    if (!node.attrs.empty()) {
      ordered_json attrs = ordered_json::object();
      for (const auto& [k, v] : node.attrs) attrs[k] = v;
      n["attrs"] = std::move(attrs);
    }
    j["nodes"].push_back(std::move(n));
  }
  j["edges"] = ordered_json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back({{"from", e.from}, {"label", e.label}, {"to", e.to}});
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> payloads(const KnowledgeGraph& g, const std::string& from,
                                  const char* label) {
  std::vector<std::string> out;
  for (const auto* n : g.children(from, label)) out.push_back(n->payload);
  return out;
}

ConfirmRule read_confirm(const KnowledgeGraph& g, const std::string& vuln_id,
                         const KgNode& node) {
  ConfirmRule rule;
  rule.vuln_id = vuln_id;
  rule.kind = confirm_kind_from(node.payload).value_or(ConfirmKind::Custom);
  rule.params = node.attrs;
  if (const auto* pos = g.first_child(node.id, "confirm_positive")) {
    rule.positive_text = pos->payload;
    rule.positive_examples = payloads(g, pos->id, "positive_example");
  }
  if (const auto* neg = g.first_child(node.id, "confirm_negative")) {
    rule.negative_text = neg->payload;
    rule.negative_examples = payloads(g, neg->id, "negative_example");
  }
  return rule;
}

}  // namespace

std::optional<VulnKnowledge> query_vuln(const KnowledgeGraph& g, const std::string& vuln_id) {
  const auto it = g.nodes.find(vuln_id);
  if (it == g.nodes.end() || it->second.type != KgNodeType::Vulnerability)
    return std::nullopt;

  VulnKnowledge k;
  k.vuln_id = vuln_id;
  if (const auto* n = g.first_child(vuln_id, "stage")) k.stage = n->payload;
  if (const auto* n = g.first_child(vuln_id, "type")) k.type = n->payload;
  if (const auto* n = g.first_child(vuln_id, "Check")) k.check = n->payload;
  if (const auto* n = g.first_child(vuln_id, "Consequence")) k.consequence = n->payload;
  k.good_examples = payloads(g, vuln_id, "GoodExample");
  k.bad_examples = payloads(g, vuln_id, "BadExample");
  for (const auto* s : g.children(vuln_id, "suggestions"))
    k.suggestions.push_back({s->payload, payloads(g, s->id, "manner")});
  for (const auto* c : g.children(vuln_id, "confirm"))
    k.confirms.push_back(read_confirm(g, vuln_id, *c));
  return k;
}

std::vector<ConfirmRule> confirm_rules(const KnowledgeGraph& g, const std::string& vuln_id) {
  auto k = query_vuln(g, vuln_id);
  return k ? std::move(k->confirms) : std::vector<ConfirmRule>{};
}

std::vector<std::string> vulnerability_ids(const KnowledgeGraph& g) {
  std::vector<std::string> out;
  for (const auto& [id, node] : g.nodes)
    if (node.type == KgNodeType::Vulnerability) out.push_back(id);
  return out;  // map order is already sorted
}

StagePartition partition_stage(const KnowledgeGraph& g, const std::string& vuln_id) {
  const auto k = query_vuln(g, vuln_id);
  if (!k) throw std::runtime_error("unknown vulnerability '" + vuln_id + "'");
  if (k->stage == "design") return StagePartition::ReportOnly;
  if (k->stage == "coding") return StagePartition::Codegen;
  throw std::runtime_error("vulnerability '" + vuln_id + "' has stage '" + k->stage +
                           "', expected 'design' or 'coding'");
}

}  // namespace fsmguard
