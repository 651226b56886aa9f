#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <stdexcept>
#include <vector>

#include "fsmguard/graph.hpp"
#include "fsmguard/fsm_text.hpp"
#include "fsmguard/injection.hpp"
#include "fsmguard/rng.hpp"
#include "support/test_util.hpp"

using namespace fsmguard;

namespace {

// Independent reachability oracle: plain BFS over the edge list.
std::vector<bool> bfs_oracle(const SecurityStateGraph& g) {
  std::vector<bool> seen(g.nodes.size(), false);
  std::deque<std::size_t> queue{g.reset_index()};
  seen[g.reset_index()] = true;
  while (!queue.empty()) {
    const std::size_t at = queue.front();
    queue.pop_front();
    for (const auto& e : g.edges) {
      if (e.from == at && !seen[e.to]) {
        seen[e.to] = true;
        queue.push_back(e.to);
      }
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("graph mirrors the machine") {
  const FsmSpec spec =
      parse_fsm_auto(testsupport::read_file(testsupport::fixture("partition.fsm")));
  const SecurityStateGraph g = build_graph(spec);

  REQUIRE(g.nodes.size() == spec.states.size());
  REQUIRE(g.edges.size() == spec.transitions.size());
  CHECK(g.fsm_name == spec.name);
  CHECK(g.kind == spec.kind);
  CHECK(g.register_width == spec.register_width);
  CHECK(g.inputs == spec.inputs);
  CHECK(g.outputs == spec.outputs);

  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(g.nodes[i].id == spec.states[i].id);
    CHECK(g.nodes[i].is_protected == spec.states[i].is_protected);
    CHECK(g.nodes[i].encoding == spec.states[i].encoding);
    CHECK(g.nodes[i].is_reset == (spec.states[i].id == spec.reset_state));
  }
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(g.nodes[g.edges[i].from].id == spec.transitions[i].from);
    CHECK(g.nodes[g.edges[i].to].id == spec.transitions[i].to);
  }
}

TEST_CASE("reset index and state lookup") {
  const FsmSpec spec =
      parse_fsm_auto(testsupport::read_file(testsupport::fixture("dead.fsm")));
  const SecurityStateGraph g = build_graph(spec);
  CHECK(g.nodes[g.reset_index()].id == spec.reset_state);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    CHECK(g.index_of(g.nodes[i].id) == i);
  }
  CHECK(!g.index_of("NO_SUCH_STATE").has_value());
}

TEST_CASE("degrees satisfy the handshake lemma on random machines") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    CAPTURE(seed);
    const SecurityStateGraph g = build_graph(generate_random_spec(seed));

    std::size_t in_sum = 0, out_sum = 0;
    std::vector<unsigned> in(g.nodes.size(), 0), out(g.nodes.size(), 0);
    for (const auto& e : g.edges) {
      ++out[e.from];
      ++in[e.to];
    }
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      REQUIRE(g.nodes[i].in_degree == in[i]);
      REQUIRE(g.nodes[i].out_degree == out[i]);
      in_sum += g.nodes[i].in_degree;
      out_sum += g.nodes[i].out_degree;
    }
    REQUIRE(in_sum == g.edges.size());
    REQUIRE(out_sum == g.edges.size());
  }
}

TEST_CASE("reachability matches an independent BFS") {
  // Random clean machines are rings, so also stir in fixtures with
  // unreachable parts and a random-severed variant.
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CAPTURE(seed);
    FsmSpec spec = generate_random_spec(seed);
    REQUIRE(reachable_from_reset(build_graph(spec)) ==
            bfs_oracle(build_graph(spec)));

    // Sever a random transition to create unreachable islands.
    Rng rng(seed * 977);
    if (!spec.transitions.empty()) {
      spec.transitions.erase(spec.transitions.begin() +
                             static_cast<long>(rng.index(spec.transitions.size())));
      const SecurityStateGraph g = build_graph(spec);
      REQUIRE(reachable_from_reset(g) == bfs_oracle(g));
    }
  }
  const SecurityStateGraph dead =
      build_graph(parse_fsm_auto(testsupport::read_file(testsupport::fixture("dead.fsm"))));
  CHECK(reachable_from_reset(dead) == bfs_oracle(dead));
}

TEST_CASE("self loops count toward both degrees") {
  const SecurityStateGraph g = build_graph(parse_fsm(
      "fsm loop moore\nstate A\nreset A\ntrans A -> A\ntrans A -> A\n"));
  REQUIRE(g.nodes.size() == 1);
  CHECK(g.nodes[0].in_degree == 2);
  CHECK(g.nodes[0].out_degree == 2);
}

TEST_CASE("building from an invalid machine throws") {
  FsmSpec broken;
  broken.name = "broken";
  CHECK_THROWS_AS(build_graph(broken), std::invalid_argument);

  FsmSpec bad_reset = generate_random_spec(7);
  bad_reset.reset_state = "NOWHERE";
  CHECK_THROWS_AS(build_graph(bad_reset), std::invalid_argument);
}

TEST_CASE("hamming distance matches a bit-loop oracle") {
  Rng rng(4242);
  for (int i = 0; i < 2000; ++i) {
    const unsigned width = static_cast<unsigned>(rng.range(1, 64));
    const std::uint64_t mask = width_mask(width);
    const BitVector a{rng.next() & mask, width};
    const BitVector b{rng.next() & mask, width};
    unsigned expect = 0;
    for (unsigned bit = 0; bit < width; ++bit) {
      expect += ((a.value >> bit) & 1) != ((b.value >> bit) & 1);
    }
    REQUIRE(hamming_distance(a, b) == expect);
    REQUIRE(hamming_distance(a, a) == 0);
    REQUIRE(hamming_distance(a, b) == hamming_distance(b, a));
  }
  CHECK_THROWS_AS(hamming_distance({0, 3}, {0, 4}), std::invalid_argument);
}
