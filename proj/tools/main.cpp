#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsmguard/detectors.hpp"
#include "fsmguard/diag.hpp"
#include "fsmguard/finding.hpp"
#include "fsmguard/fsm.hpp"
#include "fsmguard/fsm_text.hpp"
#include "fsmguard/graph.hpp"
#include "fsmguard/injection.hpp"
#include "fsmguard/kg.hpp"
#include "fsmguard/planning.hpp"
#include "fsmguard/provider.hpp"
#include "fsmguard/report.hpp"
#include "fsmguard/retrieval.hpp"
#include "fsmguard/verilog_lint.hpp"
#include "fsmguard/verilog_render.hpp"
#include "fsmguard/version.hpp"

namespace {

using namespace fsmguard;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fsmguard::ParseError({"io-error", "cannot open '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw fsmguard::ParseError({"io-error", "cannot write '" + out_path + "'"});
  out << content;
}

std::string findings_text(const std::vector<Finding>& findings) {
  if (findings.empty()) return "No findings.\n";
  std::string out;
  for (const Finding& f : findings) {
    out += f.detector_id;
    out += " at ";
    out += f.location;
    out += " [";
    out += to_string(f.phase);
    out += ", ";
    out += to_string(f.status);
    out += "]: ";
    out += f.evidence;
    out += "\n";
  }
  return out;
}

bool has_open_findings(const std::vector<Finding>& findings) {
  for (const Finding& f : findings) {
    if (f.status != FindingStatus::Refuted) return true;
  }
  return false;
}

struct Pipeline {
  FsmSpec spec;
  SecurityStateGraph graph;
  std::vector<EvaluatedFinding> evaluated;
  RetrievalResult retrieval;
};

Pipeline run_pipeline(FsmSpec spec, const KnowledgeGraph& kg) {
  Pipeline p;
  p.spec = std::move(spec);
  p.graph = build_graph(p.spec);
  p.evaluated = confirm_potential(pre_analyze(p.graph), p.graph, kg);
  p.retrieval = retrieve_knowledge(p.evaluated, kg);
  return p;
}

nlohmann::ordered_json truth_json(const GroundTruth& truth) {
  nlohmann::ordered_json doc;
  doc["detector_id"] = truth.detector_id;
  doc["location"] = truth.location;
  doc["recipe"]["class"] = to_string(truth.recipe.klass);
  doc["recipe"]["variant"] = truth.recipe.variant;
  doc["recipe"]["seed"] = truth.recipe.seed;
  return doc;
}

std::string knowledge_text(const VulnKnowledge& k) {
  std::string out = k.vuln_id + " (" + k.type + ")\n";
  out += "stage: " + k.stage + "\n";
  out += "check: " + k.check + "\n";
  if (!k.consequence.empty()) out += "consequence: " + k.consequence + "\n";
  for (const SuggestionEntry& s : k.suggestions) {
    out += "suggestion: " + s.text + "\n";
    for (const std::string& manner : s.manners) out += "  manner: " + manner + "\n";
  }
  for (const std::string& ex : k.good_examples) out += "good example:\n" + ex + "\n";
  for (const std::string& ex : k.bad_examples) out += "bad example:\n" + ex + "\n";
  for (const ConfirmRule& rule : k.confirms) {
    out += std::string("confirm: ") + to_string(rule.kind);
    for (const auto& [key, value] : rule.params) out += " " + key + "=" + value;
    out += "\n";
    if (!rule.positive_text.empty()) out += "  when confirmed: " + rule.positive_text + "\n";
    if (!rule.negative_text.empty()) out += "  when refuted: " + rule.negative_text + "\n";
  }
  return out;
}

nlohmann::ordered_json knowledge_json(const VulnKnowledge& k) {
  nlohmann::ordered_json doc;
  doc["vuln_id"] = k.vuln_id;
  doc["stage"] = k.stage;
  doc["type"] = k.type;
  doc["check"] = k.check;
  doc["consequence"] = k.consequence;
  doc["suggestions"] = nlohmann::ordered_json::array();
  for (const SuggestionEntry& s : k.suggestions) {
    doc["suggestions"].push_back({{"text", s.text}, {"manners", s.manners}});
  }
  doc["good_examples"] = k.good_examples;
  doc["bad_examples"] = k.bad_examples;
  doc["confirms"] = nlohmann::ordered_json::array();
  for (const ConfirmRule& rule : k.confirms) {
    nlohmann::ordered_json r;
    r["kind"] = to_string(rule.kind);
    r["params"] = rule.params;
    r["positive_text"] = rule.positive_text;
    r["negative_text"] = rule.negative_text;
    r["positive_examples"] = rule.positive_examples;
    r["negative_examples"] = rule.negative_examples;
    doc["confirms"].push_back(std::move(r));
  }
  return doc;
}

int run_analyze(const std::string& fsm_path, const std::string& format,
                const std::string& out_path) {
  const FsmSpec spec = parse_fsm_auto(read_file(fsm_path));
  const std::vector<Finding> findings = pre_analyze(build_graph(spec));
  emit(out_path, format == "structured" ? findings_to_json(findings) : findings_text(findings));
  return findings.empty() ? 0 : 1;
}

int run_report(const std::string& fsm_path, const std::string& kg_path,
               const std::string& format, const std::string& out_path) {
  const KnowledgeGraph kg = load_kg(read_file(kg_path));
  const Pipeline p = run_pipeline(parse_fsm_auto(read_file(fsm_path)), kg);
  emit(out_path, format == "structured"
                     ? render_report_json(p.spec, kg.version, p.evaluated, p.retrieval)
                     : render_report_markdown(p.spec, kg.version, p.evaluated, p.retrieval));
  return has_open_findings(strip_notes(p.evaluated)) ? 1 : 0;
}

int run_prompt(const std::string& fsm_path, const std::string& kg_path,
               const std::string& out_path) {
  const KnowledgeGraph kg = load_kg(read_file(kg_path));
  const Pipeline p = run_pipeline(parse_fsm_auto(read_file(fsm_path)), kg);
  emit(out_path, assemble_security_prompt(p.spec, p.retrieval));
  return 0;
}

int run_kg_validate(const std::string& kg_path) {
  const KnowledgeGraph kg = load_kg(read_file(kg_path));
  std::cout << "knowledge graph OK: " << vulnerability_ids(kg).size() << " vulnerabilities, "
            << kg.nodes.size() << " nodes, " << kg.edges.size() << " edges\n";
  return 0;
}

int run_kg_query(const std::string& kg_path, const std::string& vuln_id,
                 const std::string& format, const std::string& out_path) {
  const KnowledgeGraph kg = load_kg(read_file(kg_path));
  const std::optional<VulnKnowledge> k = query_vuln(kg, vuln_id);
  if (!k) {
    std::cerr << "error: unknown vulnerability '" << vuln_id << "'\n";
    return 2;
  }
  emit(out_path,
       format == "structured" ? knowledge_json(*k).dump(2) + "\n" : knowledge_text(*k));
  return 0;
}

int run_inject(const std::string& variant, const std::string& klass, std::uint64_t seed,
               const std::string& fsm_path, const std::string& format,
               const std::string& out_path, const std::string& truth_path,
               const std::string& verilog_path, bool list) {
  if (list) {
    for (const InjectionVariant& v : injection_variants()) {
      std::cout << v.name << "  class=" << to_string(v.klass) << "  detector=" << v.detector_id
                << "\n";
    }
    return 0;
  }
  const InjectionVariant* info = find_variant(variant);
  if (variant.empty() || info == nullptr) {
    std::cerr << "error: unknown injection variant '" << variant
              << "' (see `fsmguard inject --list`)\n";
    return 2;
  }
  InjectionRecipe recipe;
  recipe.variant = variant;
  recipe.seed = seed;
  recipe.klass = info->klass;
  if (!klass.empty()) {
    const std::optional<InjectionClass> parsed = injection_class_from(klass);
    if (!parsed) {
      std::cerr << "error: unknown injection class '" << klass << "'\n";
      return 2;
    }
    recipe.klass = *parsed;
  }
  const FsmSpec clean =
      fsm_path.empty() ? generate_random_spec(seed) : parse_fsm_auto(read_file(fsm_path));
  const InjectionResult result = inject(clean, recipe);

  if (format == "structured") {
    nlohmann::ordered_json doc;
    doc["variant"] = recipe.variant;
    doc["class"] = to_string(recipe.klass);
    doc["seed"] = recipe.seed;
    doc["spec"] = serialize_fsm(result.spec);
    doc["verilog"] = result.verilog ? nlohmann::ordered_json(*result.verilog)
                                    : nlohmann::ordered_json(nullptr);
    doc["truth"] = truth_json(result.truth);
    doc["edits"] = result.edits;
    emit(out_path, doc.dump(2) + "\n");
    return 0;
  }
  for (const std::string& edit : result.edits) std::cerr << "edit: " << edit << "\n";
  emit(out_path, serialize_fsm(result.spec));
  if (!truth_path.empty()) emit(truth_path, truth_json(result.truth).dump(2) + "\n");
  if (!verilog_path.empty()) {
    emit(verilog_path, result.verilog ? *result.verilog : render_verilog(result.spec));
  }
  return 0;
}

int run_lint(const std::string& verilog_path, const std::string& fsm_path,
             const std::string& format, const std::string& out_path) {
  FsmSpec spec;
  const bool scoped = !fsm_path.empty();
  if (scoped) spec = parse_fsm_auto(read_file(fsm_path));
  std::vector<std::string> warnings;
  const std::vector<Finding> findings =
      lint_verilog_text(read_file(verilog_path), scoped ? &spec : nullptr, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  emit(out_path, format == "structured" ? findings_to_json(findings) : findings_text(findings));
  return findings.empty() ? 0 : 1;
}

int run_generate(const std::string& fsm_path, const std::string& kg_path,
                 const std::string& provider_path, double timeout, int retries,
                 const std::string& out_dir) {
  const KnowledgeGraph kg = load_kg(read_file(kg_path));
  const Pipeline p = run_pipeline(parse_fsm_auto(read_file(fsm_path)), kg);
  const std::string prompt = assemble_security_prompt(p.spec, p.retrieval);
  const ProviderConfig cfg = load_provider_config(provider_path);
  const std::string verilog = generate(prompt, cfg, timeout, retries);

  const std::string base = out_dir.empty() ? p.spec.name : out_dir + "/" + p.spec.name;
  emit(base + ".v", verilog);
  std::vector<std::string> warnings;
  const std::vector<Finding> lint = lint_verilog_text(verilog, &p.spec, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  std::string report = render_report_markdown(p.spec, kg.version, p.evaluated, p.retrieval);
  report += "\n## Generated Code Lint\n\n";
  if (lint.empty()) {
    report += "No lint findings.\n";
  } else {
    for (const Finding& f : lint) {
      report += "- `" + f.detector_id + "` at `" + f.location + "`: " + f.evidence + "\n";
    }
  }
  emit(base + ".report.md", report);

  std::cout << "wrote " << base << ".v\n";
  std::cout << "wrote " << base << ".report.md\n";
  std::cout << findings_text(lint);
  return has_open_findings(strip_notes(p.evaluated)) || !lint.empty() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FSM security analyzer: finds state-machine vulnerabilities, retrieves "
               "remediation knowledge, and prepares security-aware generation prompts",
               "fsmguard"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  std::string fsm_path;
  std::string kg_path;
  std::string format = "text";
  std::string out_path;
  std::string vuln_id;
  std::string variant;
  std::string klass;
  std::uint64_t seed = 0;
  std::string truth_path;
  std::string verilog_out;
  bool list_variants = false;
  std::string verilog_path;
  std::string provider_path;
  double timeout = 30.0;
  int retries = 0;
  std::string out_dir = ".";
  int rc = 0;

  CLI::App* analyze = app.add_subcommand("analyze", "Run the detector sweep over a machine");
  analyze->add_option("fsm", fsm_path, "Machine description (text or structured)")->required();
  analyze->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}));
  analyze->add_option("-o,--output", out_path, "Write output to a file instead of stdout");
  analyze->callback([&] { rc = run_analyze(fsm_path, format, out_path); });

  CLI::App* report = app.add_subcommand("report", "Analyze, confirm, and render the full report");
  report->add_option("fsm", fsm_path, "Machine description (text or structured)")->required();
  report->add_option("--kg", kg_path, "Knowledge graph file")->required();
  report->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}));
  report->add_option("-o,--output", out_path, "Write output to a file instead of stdout");
  report->callback([&] { rc = run_report(fsm_path, kg_path, format, out_path); });

  CLI::App* prompt = app.add_subcommand("prompt", "Emit the security-aware generation prompt");
  prompt->add_option("fsm", fsm_path, "Machine description (text or structured)")->required();
  prompt->add_option("--kg", kg_path, "Knowledge graph file")->required();
  prompt->add_option("-o,--output", out_path, "Write output to a file instead of stdout");
  prompt->callback([&] { rc = run_prompt(fsm_path, kg_path, out_path); });

  CLI::App* kg = app.add_subcommand("kg", "Knowledge graph utilities");
  kg->require_subcommand(1);
  CLI::App* kg_validate = kg->add_subcommand("validate", "Check a knowledge graph file");
  kg_validate->add_option("kg", kg_path, "Knowledge graph file")->required();
  kg_validate->callback([&] { rc = run_kg_validate(kg_path); });
  CLI::App* kg_query = kg->add_subcommand("query", "Print one vulnerability's knowledge");
  kg_query->add_option("kg", kg_path, "Knowledge graph file")->required();
  kg_query->add_option("--vuln", vuln_id, "Vulnerability id")->required();
  kg_query->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}));
  kg_query->add_option("-o,--output", out_path, "Write output to a file instead of stdout");
  kg_query->callback([&] { rc = run_kg_query(kg_path, vuln_id, format, out_path); });

  CLI::App* inject_cmd = app.add_subcommand("inject", "Plant a known defect into a machine");
  inject_cmd->add_option("--variant", variant, "Defect variant (see --list)");
  inject_cmd->add_option("--class", klass, "Defect class (coding, structural, potential)");
  inject_cmd->add_option("--seed", seed, "Seed for every random choice");
  inject_cmd->add_option("--fsm", fsm_path,
                         "Machine to mutate (omitted: a generated clean machine)");
  inject_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}));
  inject_cmd->add_option("-o,--output", out_path, "Write the mutated machine to a file");
  inject_cmd->add_option("--truth", truth_path, "Write the ground truth document to a file");
  inject_cmd->add_option("--verilog", verilog_out, "Write rendered Verilog to a file");
  inject_cmd->add_flag("--list", list_variants, "List available variants and exit");
  inject_cmd->callback([&] {
    rc = run_inject(variant, klass, seed, fsm_path, format, out_path, truth_path, verilog_out,
                    list_variants);
  });

  CLI::App* lint = app.add_subcommand("lint-verilog", "Lint Verilog for FSM security slips");
  lint->add_option("verilog", verilog_path, "Verilog source file")->required();
  lint->add_option("--fsm", fsm_path, "Machine description used to scope encoding checks");
  lint->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}));
  lint->add_option("-o,--output", out_path, "Write output to a file instead of stdout");
  lint->callback([&] { rc = run_lint(verilog_path, fsm_path, format, out_path); });

  CLI::App* gen = app.add_subcommand(
      "generate", "Full pipeline: analyze, prompt, call the provider, lint the result");
  gen->add_option("fsm", fsm_path, "Machine description (text or structured)")->required();
  gen->add_option("--kg", kg_path, "Knowledge graph file")->required();
  gen->add_option("--provider", provider_path, "Provider config file")->required();
  gen->add_option("--timeout", timeout, "Provider timeout in seconds");
  gen->add_option("--retries", retries, "Extra provider attempts after a failure");
  gen->add_option("--out-dir", out_dir, "Directory for the generated files");
  gen->callback(
      [&] { rc = run_generate(fsm_path, kg_path, provider_path, timeout, retries, out_dir); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const fsmguard::ParseError& e) {
    for (const Diagnostic& d : e.diagnostics()) std::cerr << "error: " << to_string(d) << "\n";
    return 2;
  } catch (const ProviderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
