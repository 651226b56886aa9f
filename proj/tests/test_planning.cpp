#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "fsmguard/detectors.hpp"
#include "fsmguard/fsm_text.hpp"
#include "fsmguard/injection.hpp"
#include "fsmguard/planning.hpp"
#include "support/test_util.hpp"

using namespace fsmguard;

namespace {

KnowledgeGraph seed() {
  static const KnowledgeGraph g =
      load_kg(testsupport::read_file(testsupport::source_dir() + "/data/seed.kg"));
  return g;
}

FsmSpec fixture_spec(const char* name) {
  return parse_fsm_auto(testsupport::read_file(testsupport::fixture(name)));
}

RetrievalResult retrieval_for(const FsmSpec& spec) {
  const auto g = build_graph(spec);
  return retrieve_knowledge(confirm_potential(pre_analyze(g), g, seed()), seed());
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("template carries the five sections in fixed order") {
  const PromptTemplate t = build_template(fixture_spec("partition.fsm"));
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(t.sections[i].name == kPromptSectionNames[i]);
    CHECK(!t.sections[i].body.empty());
  }

  const std::string text = render_sections(t);
  std::size_t last = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    const std::string header =
        "### Section " + std::to_string(i + 1) + ": " + kPromptSectionNames[i];
    const std::size_t at = text.find(header);
    REQUIRE(at != std::string::npos);
    CHECK(at >= last);
    last = at;
  }
  CHECK(count_of(text, "### Section ") == 5);
}

TEST_CASE("sections cover the whole machine") {
  const FsmSpec spec = fixture_spec("partition.fsm");
  const PromptTemplate t = build_template(spec);

  const std::string& iface = t.sections[0].body;
  CHECK(iface.find("module named `vaultdoor`") != std::string::npos);
  CHECK(iface.find("clk") != std::string::npos);
  CHECK(iface.find("rst_n") != std::string::npos);
  for (const auto& s : spec.inputs) CHECK(iface.find(s.id) != std::string::npos);
  for (const auto& s : spec.outputs) CHECK(iface.find(s.id) != std::string::npos);

  const std::string& enc = t.sections[1].body;
  CHECK(enc.find("3 states") != std::string::npos);
  CHECK(enc.find("3-bit state register `state`") != std::string::npos);
  CHECK(enc.find("Use exactly these encodings:") != std::string::npos);
  CHECK(enc.find("- IDLE = 3'b000") != std::string::npos);
  CHECK(enc.find("- VAULT = 3'b011 (protected)") != std::string::npos);
  CHECK(enc.find("The register has 5 unused values") != std::string::npos);

  const std::string& trans = t.sections[2].body;
  for (const auto& tr : spec.transitions) {
    CHECK(trans.find("- " + tr.from + " -> " + tr.to + " when " + to_string(tr.guard)) !=
          std::string::npos);
  }
  CHECK(trans.find("default") != std::string::npos);
  CHECK(trans.find("`IDLE`") != std::string::npos);

  CHECK(t.sections[3].body.find("reset state `IDLE`") != std::string::npos);

  const std::string& outs = t.sections[4].body;
  CHECK(outs.find("Outputs depend on the current state only.") != std::string::npos);
  CHECK(outs.find("- in VAULT:") != std::string::npos);
  CHECK(outs.find("unlocked = 1") != std::string::npos);
}

TEST_CASE("mealy machines may read inputs in the output section") {
  const FsmSpec spec = parse_fsm(
      "fsm echo mealy\ninput a 2\noutput y 2\n"
      "state S {\n  y = a\n}\nreset S\ntrans S -> S\n");
  const PromptTemplate t = build_template(spec);
  CHECK(t.sections[4].body.find("Outputs may combine the current state with the inputs.") !=
        std::string::npos);
}

TEST_CASE("unencoded machines with protection get a spare bit") {
  // Three states fit in 2 bits, but a protected state demands distance-2
  // encodings, so the template asks for 3 bits and says why.
  const FsmSpec spec = fixture_spec("launcher.fsm");
  const std::string enc = build_template(spec).sections[1].body;
  CHECK(enc.find("3-bit state register") != std::string::npos);
  CHECK(enc.find("Choose encodings so that every protected state sits at Hamming "
                 "distance 2 or more") != std::string::npos);
  CHECK(enc.find("spare register bit") != std::string::npos);

  // Without protected states the width stays minimal and the demand is gone.
  const FsmSpec plain = fixture_spec("traffic.fsm");
  const std::string plain_enc = build_template(plain).sections[1].body;
  CHECK(plain_enc.find("2-bit state register") != std::string::npos);
  CHECK(plain_enc.find("Choose encodings") == std::string::npos);

  // A single-state machine still gets a 1-bit register.
  const std::string tiny =
      build_template(fixture_spec("minimal.fsm")).sections[1].body;
  CHECK(tiny.find("The machine has 1 state.") != std::string::npos);
  CHECK(tiny.find("1-bit state register") != std::string::npos);
}

TEST_CASE("prompt embeds the coding-stage knowledge") {
  const FsmSpec spec = fixture_spec("partition.fsm");
  const std::string prompt = assemble_security_prompt(spec, retrieval_for(spec));

  CHECK(prompt.rfind("You are a careful hardware engineer", 0) == 0);
  const std::size_t knowledge = prompt.find("## Security Knowledge");
  const std::size_t requirements = prompt.find("## Design Requirements");
  REQUIRE(knowledge != std::string::npos);
  REQUIRE(requirements != std::string::npos);
  CHECK(knowledge < requirements);
  CHECK(count_of(prompt, "### Section ") == 5);

  // Both confirmed coding-stage entries appear, each tagged with where the
  // analyzer saw it; the design-stage entry stays out of the prompt.
  CHECK(prompt.find("- DONT_CARE_STATES") != std::string::npos);
  CHECK(prompt.find("- WEAK_HAMMING") != std::string::npos);
  CHECK(prompt.find("  - found at: machine") != std::string::npos);
  CHECK(prompt.find("  - found at: (STEP,VAULT)") != std::string::npos);
  CHECK(prompt.find("- PROTECTED_EXPOSURE") == std::string::npos);

  // Knowledge-base examples surface as avoid/prefer blocks.
  CHECK(prompt.find("  - avoid:") != std::string::npos);
  CHECK(prompt.find("  - prefer:") != std::string::npos);
}

TEST_CASE("clean designs state that no knowledge applies") {
  const FsmSpec spec = fixture_spec("traffic.fsm");
  const std::string prompt = assemble_security_prompt(spec, retrieval_for(spec));
  CHECK(prompt.find("No coding-stage security knowledge applies to this design.") !=
        std::string::npos);
  CHECK(count_of(prompt, "### Section ") == 5);
}

TEST_CASE("knowledge never rewrites the design requirements") {
  const FsmSpec spec = fixture_spec("partition.fsm");
  const std::string with = assemble_security_prompt(spec, retrieval_for(spec));
  const std::string without = assemble_security_prompt(spec, RetrievalResult{});

  const std::string sections = render_sections(build_template(spec));
  CHECK(with.find(sections.substr(0, sections.size() - 1)) != std::string::npos);
  CHECK(without.find(sections.substr(0, sections.size() - 1)) != std::string::npos);
}

TEST_CASE("prompt is deterministic") {
  for (std::uint64_t s : {1ull, 17ull, 99ull}) {
    const FsmSpec spec = generate_random_spec(s);
    const auto r = retrieval_for(spec);
    CHECK(assemble_security_prompt(spec, r) == assemble_security_prompt(spec, r));
  }
}
