#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "fsmguard/detectors.hpp"
#include "fsmguard/fsm_text.hpp"
#include "fsmguard/injection.hpp"
#include "support/test_util.hpp"

using namespace fsmguard;

namespace {

std::vector<Finding> run_detector(const std::string& id, const FsmSpec& spec) {
  const DetectorInfo* d = find_detector(id);
  REQUIRE(d != nullptr);
  return d->run(build_graph(spec));
}

std::vector<Finding> analyze_fixture(const char* name) {
  return pre_analyze(
      build_graph(parse_fsm_auto(testsupport::read_file(testsupport::fixture(name)))));
}

std::set<std::string> detector_ids(const std::vector<Finding>& fs) {
  std::set<std::string> ids;
  for (const auto& f : fs) ids.insert(f.detector_id);
  return ids;
}

}  // namespace

TEST_CASE("registry is ordered by id and consistent") {
  const auto& reg = detector_registry();
  REQUIRE(reg.size() == 9);
  CHECK(std::is_sorted(reg.begin(), reg.end(),
                       [](const auto& a, const auto& b) { return a.id < b.id; }));
  for (const auto& d : reg) {
    CAPTURE(d.id);
    CHECK(find_detector(d.id) == &d);
    CHECK(d.run != nullptr);
  }
  CHECK(find_detector("NOT_A_DETECTOR") == nullptr);

  // Pinned vulnerability mapping: most detectors report under their own name,
  // the exceptions map onto CWE entries or the dead-state class.
  CHECK(find_detector("DEAD_STATE_NO_INCOMING")->vuln_id == "DEAD_STATE");
  CHECK(find_detector("MISSING_RESET_COVERAGE")->vuln_id == "CWE-1245");
  CHECK(find_detector("OVERFLOW_OUTPUT")->vuln_id == "CWE-190");
  CHECK(find_detector("WEAK_HAMMING")->vuln_id == "WEAK_HAMMING");

  // Phase split: graph-visible defects are structural, everything that needs
  // knowledge-base confirmation is potential.
  for (const char* id :
       {"DEAD_STATE_NO_INCOMING", "MISSING_RESET_COVERAGE", "PROTECTED_EXPOSURE",
        "TERMINAL_STATE", "UNREACHABLE_FROM_RESET"})
    CHECK(find_detector(id)->phase == Phase::Structural);
  for (const char* id :
       {"DONT_CARE_STATES", "DUPLICATE_ENCODING", "OVERFLOW_OUTPUT", "WEAK_HAMMING"})
    CHECK(find_detector(id)->phase == Phase::Potential);
}

TEST_CASE("dead state: non-reset states without incoming transitions") {
  const FsmSpec spec = parse_fsm(
      "fsm t moore\nstate A\nstate B\nstate C\nreset A\n"
      "trans A -> B\ntrans B -> A\ntrans C -> A\n");
  const auto fs = run_detector("DEAD_STATE_NO_INCOMING", spec);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].location == "C");
  CHECK(fs[0].evidence == "no incoming transitions");
  CHECK(fs[0].status == FindingStatus::Raw);

  // The reset state is exempt even with no incoming edges.
  const FsmSpec ring = parse_fsm(
      "fsm t moore\nstate A\nstate B\nreset A\ntrans A -> B\ntrans B -> B\n");
  CHECK(run_detector("DEAD_STATE_NO_INCOMING", ring).size() == 0);
}

TEST_CASE("unreachable: flagged per state with the reset named") {
  const FsmSpec spec = parse_fsm(
      "fsm t moore\nstate A\nstate B\nstate C\nstate D\nreset A\n"
      "trans A -> B\ntrans C -> D\ntrans D -> C\ntrans B -> A\n");
  auto fs = run_detector("UNREACHABLE_FROM_RESET", spec);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].location == "C");
  CHECK(fs[1].location == "D");
  CHECK(fs[0].evidence == "not reachable from reset state 'A'");
}

TEST_CASE("terminal: states with no way out") {
  const FsmSpec spec = parse_fsm(
      "fsm t moore\nstate A\nstate HALT\nreset A\ntrans A -> HALT\n");
  auto fs = run_detector("TERMINAL_STATE", spec);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].location == "HALT");
  CHECK(fs[0].evidence == "no outgoing transitions");
}

TEST_CASE("protected exposure: unconditional entry from unprotected states") {
  const FsmSpec spec = parse_fsm(
      "fsm t moore\ninput go\nstate A\nstate P protected\nstate Q protected\n"
      "reset A\n"
      "trans A -> P\n"            // unconditional: flagged
      "trans A -> Q when go\n"    // guarded: fine
      "trans P -> Q\n"            // protected-to-protected: fine
      "trans Q -> A\n");
  auto fs = run_detector("PROTECTED_EXPOSURE", spec);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].location == "transition:0000");
  CHECK(fs[0].evidence ==
        "unconditional transition from 'A' into protected state 'P'");

  // A constant-true guard that never reads an input is still unconditional.
  const FsmSpec constant = parse_fsm(
      "fsm t moore\nstate A\nstate P protected\nreset A\n"
      "trans A -> P when 1\ntrans P -> A\n");
  CHECK(run_detector("PROTECTED_EXPOSURE", constant).size() == 1);
}

TEST_CASE("missing reset coverage needs both dont-cares and no reentry") {
  // width 2 over 3 states -> one don't-care; nothing re-enters reset.
  const FsmSpec no_reentry = parse_fsm(
      "fsm t moore\nwidth 2\nstate A\nstate B\nstate C\nreset A\n"
      "trans A -> B\ntrans B -> C\ntrans C -> B\n");
  auto fs = run_detector("MISSING_RESET_COVERAGE", no_reentry);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].location == "machine");
  CHECK(fs[0].evidence ==
        "no transition re-enters reset state 'A' and 1 don't-care encodings exist");

  // Same machine with a reentry edge: clean.
  const FsmSpec reentry = parse_fsm(
      "fsm t moore\nwidth 2\nstate A\nstate B\nstate C\nreset A\n"
      "trans A -> B\ntrans B -> C\ntrans C -> A\n");
  CHECK(run_detector("MISSING_RESET_COVERAGE", reentry).empty());

  // Full state space (4 states in width 2): clean even without reentry.
  const FsmSpec full = parse_fsm(
      "fsm t moore\nwidth 2\nstate A\nstate B\nstate C\nstate D\nreset A\n"
      "trans A -> B\ntrans B -> C\ntrans C -> D\ntrans D -> B\n");
  CHECK(run_detector("MISSING_RESET_COVERAGE", full).empty());

  // A self-loop on reset does not count as re-entering it.
  const FsmSpec self_loop = parse_fsm(
      "fsm t moore\nwidth 2\nstate A\nstate B\nstate C\nreset A\n"
      "trans A -> A\ntrans A -> B\ntrans B -> C\ntrans C -> B\n");
  CHECK(run_detector("MISSING_RESET_COVERAGE", self_loop).size() == 1);
}

TEST_CASE("dont care states: count and totals pinned") {
  const FsmSpec spec = parse_fsm(
      "fsm t moore\nwidth 3\nstate A\nstate B\nstate C\nreset A\n"
      "trans A -> B\ntrans B -> C\ntrans C -> A\n");
  auto fs = run_detector("DONT_CARE_STATES", spec);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].location == "machine");
  CHECK(fs[0].evidence ==
        "5 of 8 register values are not used by the 3 declared states");

  // No declared width means no register model to judge.
  const FsmSpec unsized = parse_fsm(
      "fsm t moore\nstate A\nstate B\nstate C\nreset A\n"
      "trans A -> B\ntrans B -> C\ntrans C -> A\n");
  CHECK(run_detector("DONT_CARE_STATES", unsized).empty());
}

TEST_CASE("overflow output: arithmetic wider than the declared output") {
  const FsmSpec spec = parse_fsm(
      "fsm t mealy\ninput a 4\ninput b 4\noutput sum 4\noutput wide 5\n"
      "state S {\n  sum = a + b\n  wide = a + b\n}\n"
      "reset S\ntrans S -> S\n");
  auto fs = run_detector("OVERFLOW_OUTPUT", spec);
  REQUIRE(fs.size() == 1);  // `wide` has 5 bits for a 5-bit sum
  CHECK(fs[0].location == "S.sum");
  CHECK(fs[0].evidence ==
        "arithmetic width 5 exceeds output 'sum' width 4 in 'a + b'");

  // Nested arithmetic is judged by the widest arithmetic node.
  const FsmSpec nested = parse_fsm(
      "fsm t mealy\ninput a 4\ninput b 4\noutput y 8\n"
      "state S {\n  y = (a * b) & 8'hFF\n}\nreset S\ntrans S -> S\n");
  CHECK(run_detector("OVERFLOW_OUTPUT", nested).empty());

  const FsmSpec nested_wide = parse_fsm(
      "fsm t mealy\ninput a 4\ninput b 4\noutput y 7\n"
      "state S {\n  y = (a * b) & 7'h7F\n}\nreset S\ntrans S -> S\n");
  auto nf = run_detector("OVERFLOW_OUTPUT", nested_wide);
  REQUIRE(nf.size() == 1);
  CHECK(nf[0].location == "S.y");
}

TEST_CASE("duplicate encoding: every colliding pair, unprotected included") {
  const FsmSpec spec = parse_fsm(
      "fsm t moore\nstate A encoding 2'b00\nstate B encoding 2'b00\n"
      "state C encoding 2'b00\nreset A\n"
      "trans A -> B\ntrans B -> C\ntrans C -> A\n");
  auto fs = run_detector("DUPLICATE_ENCODING", spec);
  REQUIRE(fs.size() == 3);  // all three pairs collide
  CHECK(fs[0].location == "(A,B)");
  CHECK(fs[0].evidence == "states share encoding 2'b00");
  CHECK(fs[1].location == "(A,C)");
  CHECK(fs[2].location == "(B,C)");
}

TEST_CASE("weak hamming: distance below two on pairs touching protection") {
  const FsmSpec spec = parse_fsm(
      "fsm t moore\nstate A encoding 3'b000\nstate B encoding 3'b001\n"
      "state P encoding 3'b011 protected\nreset A\n"
      "trans A -> B\ntrans B -> P\ntrans P -> A\n");
  auto fs = run_detector("WEAK_HAMMING", spec);
  // (A,B) is distance 1 but unprotected; (B,P) is distance 1 with P protected;
  // (A,P) is distance 2.
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].location == "(B,P)");
  CHECK(fs[0].evidence ==
        "hamming distance 1 between 3'b001 and 3'b011 on a pair involving a "
        "protected state");

  // Distance zero on a protected pair is also below the threshold.
  const FsmSpec dup = parse_fsm(
      "fsm t moore\nstate A encoding 2'b01\nstate P encoding 2'b01 protected\n"
      "reset A\ntrans A -> P\ntrans P -> A\n");
  auto dfs = run_detector("WEAK_HAMMING", dup);
  REQUIRE(dfs.size() == 1);
  CHECK(dfs[0].evidence ==
        "hamming distance 0 between 2'b01 and 2'b01 on a pair involving a "
        "protected state");
}

TEST_CASE("fixtures carry exactly the expected detector sets") {
  CHECK(detector_ids(analyze_fixture("minimal.fsm")).empty());
  CHECK(detector_ids(analyze_fixture("traffic.fsm")).empty());
  CHECK(detector_ids(analyze_fixture("launcher.fsm")).empty());
  CHECK(detector_ids(analyze_fixture("dead.fsm")) ==
        std::set<std::string>{"DEAD_STATE_NO_INCOMING", "UNREACHABLE_FROM_RESET"});
  CHECK(detector_ids(analyze_fixture("lock.fsm")) ==
        std::set<std::string>{"PROTECTED_EXPOSURE"});
  CHECK(detector_ids(analyze_fixture("overflow.fsm")) ==
        std::set<std::string>{"OVERFLOW_OUTPUT"});
  CHECK(detector_ids(analyze_fixture("partition.fsm")) ==
        std::set<std::string>{"PROTECTED_EXPOSURE", "DONT_CARE_STATES", "WEAK_HAMMING"});
}

TEST_CASE("pre_analyze merges in stable report order") {
  const auto fs = analyze_fixture("dead.fsm");
  REQUIRE(fs.size() == 2);
  CHECK(std::is_sorted(fs.begin(), fs.end(), finding_less));
  for (const auto& f : fs) CHECK(f.status == FindingStatus::Raw);

  // Random clean machines stay clean under the full sweep.
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CAPTURE(seed);
    REQUIRE(pre_analyze(build_graph(generate_random_spec(seed))).empty());
  }
}
