#include "fsmguard/graph.hpp"

#include <deque>
#include <map>
#include <stdexcept>

namespace fsmguard {

std::size_t SecurityStateGraph::reset_index() const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].is_reset) return i;
  throw std::logic_error("graph has no reset node");
}

std::optional<std::size_t> SecurityStateGraph::index_of(const std::string& state_id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == state_id) return i;
  return std::nullopt;
}

SecurityStateGraph build_graph(const FsmSpec& spec) {
  if (auto diags = validate(spec); !diags.empty())
    throw std::invalid_argument("cannot build graph from invalid spec: " +
                                to_string(diags.front()));

  SecurityStateGraph g;
  g.fsm_name = spec.name;
  g.kind = spec.kind;
  g.register_width = spec.register_width;
  g.inputs = spec.inputs;
  g.outputs = spec.outputs;

  std::map<std::string, std::size_t> index;
  for (const auto& st : spec.states) {
    GraphNode n;
    n.id = st.id;
    n.is_reset = st.id == spec.reset_state;
    n.is_protected = st.is_protected;
    n.encoding = st.encoding;
    n.outputs = st.outputs;
    index[st.id] = g.nodes.size();
    g.nodes.push_back(std::move(n));
  }

  for (const auto& t : spec.transitions) {
    GraphEdge e;
    e.from = index.at(t.from);
    e.to = index.at(t.to);
    e.guard = t.guard;
    g.nodes[e.from].out_degree++;
    g.nodes[e.to].in_degree++;
    g.edges.push_back(std::move(e));
  }
  return g;
}

std::vector<bool> reachable_from_reset(const SecurityStateGraph& g) {
  std::vector<bool> seen(g.nodes.size(), false);
  std::vector<std::vector<std::size_t>> adj(g.nodes.size());
  for (const auto& e : g.edges) adj[e.from].push_back(e.to);

  std::deque<std::size_t> queue{g.reset_index()};
  seen[g.reset_index()] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace fsmguard
