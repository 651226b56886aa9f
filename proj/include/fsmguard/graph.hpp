#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fsmguard/fsm.hpp"

namespace fsmguard {

struct GraphNode {
  std::string id;
  bool is_reset = false;
  bool is_protected = false;
  std::optional<BitVector> encoding;
  std::vector<std::pair<std::string, Expr>> outputs;
  unsigned in_degree = 0;   // counts self-loops
  unsigned out_degree = 0;
};

struct GraphEdge {
  std::size_t from = 0;  // node indices
  std::size_t to = 0;
  Expr guard;
};

// Directed multigraph over the machine's states, annotated with everything
// the detectors look at. Node order follows state declaration order; edge
// order follows transition declaration order.
struct SecurityStateGraph {
  std::string fsm_name;
  FsmKind kind = FsmKind::Moore;
  std::optional<unsigned> register_width;
  std::vector<SignalDecl> inputs;
  std::vector<SignalDecl> outputs;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  std::size_t reset_index() const;
  std::optional<std::size_t> index_of(const std::string& state_id) const;
};

// Requires a spec that validate() accepts; throws std::invalid_argument
// otherwise.
SecurityStateGraph build_graph(const FsmSpec& spec);

// Nodes reachable from the reset state, as a parallel bool vector.
std::vector<bool> reachable_from_reset(const SecurityStateGraph& g);

}  // namespace fsmguard
