#include "fsmguard/detectors.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace fsmguard {
namespace {

std::map<std::string, unsigned> input_widths(const SecurityStateGraph& g) {
  std::map<std::string, unsigned> w;
  for (const auto& s : g.inputs) w[s.id] = s.width;
  return w;
}

bool has_dont_cares(const SecurityStateGraph& g) {
  return g.register_width && *g.register_width < 64 &&
         (std::uint64_t{1} << *g.register_width) > g.nodes.size();
}

std::uint64_t dont_care_count(const SecurityStateGraph& g) {
  return (std::uint64_t{1} << *g.register_width) - g.nodes.size();
}

Finding make(const DetectorInfo& d, std::string location, std::string evidence) {
  return {d.id, d.vuln_id, d.phase, std::move(location), std::move(evidence),
          FindingStatus::Raw};
}

std::vector<Finding> dead_state(const DetectorInfo& d, const SecurityStateGraph& g) {
  std::vector<Finding> out;
  for (const auto& n : g.nodes) {
    if (!n.is_reset && n.in_degree == 0)
      out.push_back(make(d, n.id, "no incoming transitions"));
  }
  return out;
}

std::vector<Finding> unreachable(const DetectorInfo& d, const SecurityStateGraph& g) {
  std::vector<Finding> out;
  const auto seen = reachable_from_reset(g);
  const std::string reset = g.nodes[g.reset_index()].id;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!seen[i])
      out.push_back(make(d, g.nodes[i].id,
                         "not reachable from reset state '" + reset + "'"));
  }
  return out;
}

std::vector<Finding> terminal(const DetectorInfo& d, const SecurityStateGraph& g) {
  std::vector<Finding> out;
  for (const auto& n : g.nodes) {
    if (n.out_degree == 0)
      out.push_back(make(d, n.id, "no outgoing transitions"));
  }
  return out;
}

std::vector<Finding> protected_exposure(const DetectorInfo& d, const SecurityStateGraph& g) {
  std::vector<Finding> out;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    const auto& from = g.nodes[e.from];
    const auto& to = g.nodes[e.to];
    if (to.is_protected && !from.is_protected && !references_any_signal(e.guard))
      out.push_back(make(d, transition_location(i),
                         "unconditional transition from '" + from.id +
                             "' into protected state '" + to.id + "'"));
  }
  return out;
}

std::vector<Finding> missing_reset_coverage(const DetectorInfo& d,
                                            const SecurityStateGraph& g) {
  if (!has_dont_cares(g)) return {};
  const std::size_t reset = g.reset_index();
  for (const auto& e : g.edges) {
    if (e.to == reset && e.from != reset) return {};
  }
  return {make(d, "machine",
               "no transition re-enters reset state '" + g.nodes[reset].id + "' and " +
                   std::to_string(dont_care_count(g)) + " don't-care encodings exist")};
}

std::vector<Finding> dont_care_states(const DetectorInfo& d, const SecurityStateGraph& g) {
  if (!has_dont_cares(g)) return {};
  const std::uint64_t total = std::uint64_t{1} << *g.register_width;
  return {make(d, "machine",
               std::to_string(dont_care_count(g)) + " of " + std::to_string(total) +
                   " register values are not used by the " +
                   std::to_string(g.nodes.size()) + " declared states")};
}

std::vector<Finding> overflow_output(const DetectorInfo& d, const SecurityStateGraph& g) {
  std::vector<Finding> out;
  const auto widths = input_widths(g);
  std::map<std::string, unsigned> out_width;
  for (const auto& s : g.outputs) out_width[s.id] = s.width;
  for (const auto& n : g.nodes) {
    for (const auto& [sig, expr] : n.outputs) {
      const unsigned arith = max_arith_width(expr, widths);
      const unsigned declared = out_width.at(sig);
      if (arith > declared)
        out.push_back(make(d, n.id + "." + sig,
                           "arithmetic width " + std::to_string(arith) +
                               " exceeds output '" + sig + "' width " +
                               std::to_string(declared) + " in '" + to_string(expr) +
                               "'"));
    }
  }
  return out;
}

std::vector<Finding> duplicate_encoding(const DetectorInfo& d, const SecurityStateGraph& g) {
  std::vector<Finding> out;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!g.nodes[i].encoding) continue;
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      if (!g.nodes[j].encoding) continue;
      if (*g.nodes[i].encoding == *g.nodes[j].encoding)
        out.push_back(make(d, pair_location(g.nodes[i].id, g.nodes[j].id),
                           "states share encoding " + to_string(*g.nodes[i].encoding)));
    }
  }
  return out;
}

std::vector<Finding> weak_hamming(const DetectorInfo& d, const SecurityStateGraph& g) {
  std::vector<Finding> out;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& a = g.nodes[i];
    if (!a.encoding) continue;
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      const auto& b = g.nodes[j];
      if (!b.encoding) continue;
      if (!a.is_protected && !b.is_protected) continue;
      if (a.encoding->width != b.encoding->width) continue;
      const unsigned dist = hamming_distance(*a.encoding, *b.encoding);
      if (dist < 2)
        out.push_back(make(d, pair_location(a.id, b.id),
                           "hamming distance " + std::to_string(dist) + " between " +
                               to_string(*a.encoding) + " and " + to_string(*b.encoding) +
                               " on a pair involving a protected state"));
    }
  }
  return out;
}

std::vector<DetectorInfo> build_registry() {
  std::vector<DetectorInfo> r;
  auto add = [&r](std::string id, std::string vuln, Phase phase,
                  std::vector<Finding> (*fn)(const DetectorInfo&,
                                             const SecurityStateGraph&)) {
    DetectorInfo d{std::move(id), std::move(vuln), phase, nullptr};
    d.run = [id = d.id, vuln = d.vuln_id, phase, fn](const SecurityStateGraph& g) {
      return fn(DetectorInfo{id, vuln, phase, nullptr}, g);
    };
    r.push_back(std::move(d));
  };
  add("DEAD_STATE_NO_INCOMING", "DEAD_STATE", Phase::Structural, dead_state);
  add("DONT_CARE_STATES", "DONT_CARE_STATES", Phase::Potential, dont_care_states);
  add("DUPLICATE_ENCODING", "DUPLICATE_ENCODING", Phase::Potential, duplicate_encoding);
  add("MISSING_RESET_COVERAGE", "CWE-1245", Phase::Structural, missing_reset_coverage);
  add("OVERFLOW_OUTPUT", "CWE-190", Phase::Potential, overflow_output);
  add("PROTECTED_EXPOSURE", "PROTECTED_EXPOSURE", Phase::Structural, protected_exposure);
  add("TERMINAL_STATE", "TERMINAL_STATE", Phase::Structural, terminal);
  add("UNREACHABLE_FROM_RESET", "UNREACHABLE_FROM_RESET", Phase::Structural, unreachable);
  add("WEAK_HAMMING", "WEAK_HAMMING", Phase::Potential, weak_hamming);
  return r;
}

}  // namespace

const std::vector<DetectorInfo>& detector_registry() {
  static const std::vector<DetectorInfo> registry = build_registry();
  return registry;
}

const DetectorInfo* find_detector(const std::string& id) {
  for (const auto& d : detector_registry())
    if (d.id == id) return &d;
  return nullptr;
}

std::vector<Finding> pre_analyze(const SecurityStateGraph& g) {
  std::vector<Finding> all;
  for (const auto& d : detector_registry()) {
    auto found = d.run(g);
    all.insert(all.end(), std::make_move_iterator(found.begin()),
               std::make_move_iterator(found.end()));
  }
  sort_findings(all);
  return all;
}

std::string transition_location(std::size_t edge_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "transition:%04zu", edge_index);
  return buf;
}

std::string pair_location(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

}  // namespace fsmguard
