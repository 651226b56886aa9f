#pragma once

// Random conformant knowledge graphs for round-trip and validation tests.

#include <string>

#include "fsmguard/kg.hpp"
#include "fsmguard/rng.hpp"

namespace testsupport {

// Builds a graph that validate_kg accepts: every vulnerability gets its
// mandatory children, edge labels follow target roles, confirm nodes carry
// both branches and legal parameters, and nothing is left orphaned.
inline fsmguard::KnowledgeGraph random_kg(fsmguard::Rng& rng) {
  using fsmguard::KgEdge;
  using fsmguard::KgNode;
  using fsmguard::KgNodeType;

  fsmguard::KnowledgeGraph g;
  g.version = std::to_string(rng.range(1, 9));

  const std::size_t n_vulns = 1 + rng.index(4);
  for (std::size_t v = 0; v < n_vulns; ++v) {
    const std::string vid = "VULN_" + std::to_string(v);
    g.nodes[vid] = KgNode{vid, KgNodeType::Vulnerability, "vulnerability " + vid, {}};

    auto child = [&g, &rng](const std::string& parent, const std::string& id,
                            KgNodeType type, const char* label, std::string payload) {
      g.nodes[id] = KgNode{id, type, std::move(payload), {}};
      g.edges.push_back(KgEdge{parent, label, id});
      (void)rng;
    };

    child(vid, vid + ".stage", KgNodeType::Stage, "stage",
          rng.coin() ? "design" : "coding");
    child(vid, vid + ".type", KgNodeType::Type, "type",
          "weakness class " + std::to_string(rng.below(100)));
    child(vid, vid + ".check", KgNodeType::Check, "Check",
          "inspect property " + std::to_string(rng.below(100)));
    if (rng.coin())
      child(vid, vid + ".consequence", KgNodeType::Consequence, "Consequence",
            "possible impact " + std::to_string(rng.below(100)));

    for (std::size_t i = 0, n = rng.index(3); i < n; ++i)
      child(vid, vid + ".good" + std::to_string(i), KgNodeType::GoodExample,
            "GoodExample", "good sample " + std::to_string(i));
    for (std::size_t i = 0, n = rng.index(3); i < n; ++i)
      child(vid, vid + ".bad" + std::to_string(i), KgNodeType::BadExample,
            "BadExample", "bad sample " + std::to_string(i));

    const std::size_t n_fix = 1 + rng.index(2);
    for (std::size_t i = 0; i < n_fix; ++i) {
      const std::string fid = vid + ".fix" + std::to_string(i);
      child(vid, fid, KgNodeType::Suggestions, "suggestions",
            "remediation " + std::to_string(i));
      for (std::size_t m = 0, n = rng.index(3); m < n; ++m)
        child(fid, fid + ".how" + std::to_string(m), KgNodeType::Manner, "manner",
              "concrete step " + std::to_string(m));
    }

    for (std::size_t i = 0, n = rng.index(3); i < n; ++i) {
      const std::string cid = vid + ".confirm" + std::to_string(i);
      static const char* kinds[] = {
          "output-expr-arithmetic", "encoding-pair-distance-below",
          "dont-care-count-positive", "always-true-guard-into-protected", "custom"};
      const std::string kind = kinds[rng.index(5)];
      g.nodes[cid] = KgNode{cid, KgNodeType::Confirm, kind, {}};
      if (kind == "encoding-pair-distance-below")
        g.nodes[cid].attrs["threshold"] = std::to_string(rng.range(1, 3));
      g.edges.push_back(KgEdge{vid, "confirm", cid});

      child(cid, cid + ".yes", KgNodeType::ConfirmPositive, "confirm_positive",
            "confirmed because " + std::to_string(rng.below(100)));
      child(cid, cid + ".no", KgNodeType::ConfirmNegative, "confirm_negative",
            "refuted because " + std::to_string(rng.below(100)));
      if (rng.coin())
        child(cid + ".yes", cid + ".yes.ex", KgNodeType::PositiveExample,
              "positive_example", "matching design sketch");
      if (rng.coin())
        child(cid + ".no", cid + ".no.ex", KgNodeType::NegativeExample,
              "negative_example", "counterexample sketch");
    }
  }

  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

}  // namespace testsupport
