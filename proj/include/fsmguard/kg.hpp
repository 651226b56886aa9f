#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsmguard/diag.hpp"

namespace fsmguard {

// Node roles in the security knowledge graph. The serialized names mirror
// their role labels exactly, including case: "Vulnerability", "stage",
// "type", "Check", "Consequence", "GoodExample", "BadExample", "suggestions",
// "manner", "confirm", "confirm_positive", "confirm_negative",
// "positive_example", "negative_example".
enum class KgNodeType {
  Vulnerability,
  Stage,
  Type,
  Check,
  Consequence,
  GoodExample,
  BadExample,
  Suggestions,
  Manner,
  Confirm,
  ConfirmPositive,
  ConfirmNegative,
  PositiveExample,
  NegativeExample,
};

const char* to_string(KgNodeType t);
std::optional<KgNodeType> kg_node_type_from(const std::string& name);

struct KgNode {
  std::string id;
  KgNodeType type = KgNodeType::Vulnerability;
  std::string payload;
  std::map<std::string, std::string> attrs;

  friend bool operator==(const KgNode&, const KgNode&) = default;
};

// Edge labels repeat the target's role name, e.g. a Vulnerability points at
// its stage node through an edge labeled "stage".
struct KgEdge {
  std::string from;
  std::string label;
  std::string to;

  friend auto operator<=>(const KgEdge&, const KgEdge&) = default;
};

struct KnowledgeGraph {
  std::string version = "1";
  std::map<std::string, KgNode> nodes;  // keyed by node id
  std::vector<KgEdge> edges;            // sorted, no duplicates

  // Targets of `from`'s edges with the given label, in edge order.
  std::vector<const KgNode*> children(const std::string& from, const char* label) const;
  const KgNode* first_child(const std::string& from, const char* label) const;

  friend bool operator==(const KnowledgeGraph&, const KnowledgeGraph&) = default;
};

// Predicates a confirm node can name in its payload.
enum class ConfirmKind {
  OutputExprArithmetic,         // "output-expr-arithmetic"
  EncodingPairDistanceBelow,    // "encoding-pair-distance-below", param threshold
  DontCareCountPositive,        // "dont-care-count-positive"
  AlwaysTrueGuardIntoProtected, // "always-true-guard-into-protected"
  Custom,                       // "custom": never auto-decided
};

const char* to_string(ConfirmKind k);
std::optional<ConfirmKind> confirm_kind_from(const std::string& name);

struct ConfirmRule {
  std::string vuln_id;
  ConfirmKind kind = ConfirmKind::Custom;
  std::map<std::string, std::string> params;
  std::string positive_text;
  std::string negative_text;
  std::vector<std::string> positive_examples;
  std::vector<std::string> negative_examples;
};

struct SuggestionEntry {
  std::string text;
  std::vector<std::string> manners;
};

struct VulnKnowledge {
  std::string vuln_id;
  std::string stage;
  std::string type;
  std::string check;
  std::string consequence;
  std::vector<std::string> good_examples;
  std::vector<std::string> bad_examples;
  std::vector<SuggestionEntry> suggestions;
  std::vector<ConfirmRule> confirms;
};

// Structural rules every graph must satisfy; returns one diagnostic per
// violation. Codes: unknown-endpoint, edge-type-violation,
// missing-mandatory-edge, orphan-node, no-vulnerability-nodes,
// bad-confirm-params.
std::vector<Diagnostic> validate_kg(const KnowledgeGraph& g);

// Parses and validates; throws ParseError carrying every diagnostic (adding
// syntax-error, duplicate-id, unknown-node-type for problems the in-memory
// form cannot hold).
KnowledgeGraph load_kg(const std::string& text);

// Canonical form: version, nodes sorted by id, edges sorted by
// (from, label, to). load_kg(serialize_kg(g)) == g for any valid graph.
std::string serialize_kg(const KnowledgeGraph& g);

std::optional<VulnKnowledge> query_vuln(const KnowledgeGraph& g, const std::string& vuln_id);
std::vector<ConfirmRule> confirm_rules(const KnowledgeGraph& g, const std::string& vuln_id);
std::vector<std::string> vulnerability_ids(const KnowledgeGraph& g);

// Which downstream consumer a vulnerability's knowledge feeds: entries staged
// "design" surface only in the report, entries staged "coding" also steer
// code generation.
enum class StagePartition { ReportOnly, Codegen };

// Throws std::runtime_error for an unknown vulnerability or a stage payload
// that is neither "design" nor "coding".
StagePartition partition_stage(const KnowledgeGraph& g, const std::string& vuln_id);

}  // namespace fsmguard
