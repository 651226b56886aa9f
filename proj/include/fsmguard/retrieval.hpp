#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsmguard/finding.hpp"
#include "fsmguard/graph.hpp"
#include "fsmguard/kg.hpp"

namespace fsmguard {

struct EvaluatedFinding {
  Finding finding;
  // Rule text that decided the status (positive_text on confirmed,
  // negative_text on refuted) or a caveat for unconfirmed findings.
  std::string note;
};

// Second-pass check of every finding against the graph and the knowledge
// base. Structural findings are facts and come back confirmed. Potential
// findings are re-examined by their vulnerability's confirm rules: any rule
// that holds confirms, all rules failing refutes, and no decidable rule
// leaves the finding unconfirmed.
std::vector<EvaluatedFinding> confirm_potential(const std::vector<Finding>& findings,
                                                const SecurityStateGraph& g,
                                                const KnowledgeGraph& kg);

// One vulnerability's knowledge bundle plus the findings that pulled it in.
// Markers record retrieval caveats: "unconfirmed-caveat" (only unconfirmed
// findings reference it), "no-knowledge" (vulnerability absent from the
// graph), "unknown-stage" (stage payload neither design nor coding).
struct KnowledgeItem {
  std::string vuln_id;
  std::optional<VulnKnowledge> knowledge;
  std::vector<Finding> findings;
  std::vector<std::string> markers;
};

struct RetrievalResult {
  // Everything worth reporting, sorted by vulnerability id.
  std::vector<KnowledgeItem> report_items;
  // The coding-stage subset backed by confirmed findings; this is what the
  // generation prompt embeds.
  std::vector<KnowledgeItem> codegen_items;
  // Refuted findings, kept for the report appendix.
  std::vector<EvaluatedFinding> refuted;
};

RetrievalResult retrieve_knowledge(const std::vector<EvaluatedFinding>& evaluated,
                                   const KnowledgeGraph& kg);

std::vector<Finding> strip_notes(const std::vector<EvaluatedFinding>& evaluated);

}  // namespace fsmguard
