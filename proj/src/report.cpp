#include "fsmguard/report.hpp"

#include <sstream>

#include <json.hpp>

#include "fsmguard/version.hpp"

namespace fsmguard {

using ordered_json = nlohmann::ordered_json;

namespace {

struct Counts {
  std::size_t total = 0, confirmed = 0, unconfirmed = 0, refuted = 0;
};

Counts count_statuses(const std::vector<EvaluatedFinding>& evaluated) {
  Counts c;
  c.total = evaluated.size();
  for (const auto& ev : evaluated) {
    switch (ev.finding.status) {
      case FindingStatus::Confirmed: ++c.confirmed; break;
      case FindingStatus::Unconfirmed: ++c.unconfirmed; break;
      case FindingStatus::Refuted: ++c.refuted; break;
      case FindingStatus::Raw: break;
    }
  }
  return c;
}

void render_finding_line(std::ostringstream& out, const EvaluatedFinding& ev) {
  const auto& f = ev.finding;
  out << "- `" << f.detector_id << "` at `" << f.location << "` [" << to_string(f.phase)
      << ", " << to_string(f.status) << "]: " << f.evidence << "\n";
  if (!ev.note.empty()) out << "  - note: " << ev.note << "\n";
}

void render_example_block(std::ostringstream& out, const char* title,
                          const std::vector<std::string>& examples) {
  for (const auto& ex : examples) {
    out << "- " << title << ":\n\n```\n" << ex;
    if (ex.empty() || ex.back() != '\n') out << "\n";
    out << "```\n";
  }
}

void render_item(std::ostringstream& out, const KnowledgeItem& item) {
  out << "### " << item.vuln_id;
  if (item.knowledge && !item.knowledge->type.empty())
    out << " (" << item.knowledge->type << ")";
  out << "\n\n";
  if (!item.markers.empty()) {
    out << "- markers: ";
    for (std::size_t i = 0; i < item.markers.size(); ++i)
      out << (i ? ", " : "") << item.markers[i];
    out << "\n";
  }
  if (!item.knowledge) {
    out << "- no knowledge recorded for this vulnerability\n";
  } else {
    const auto& k = *item.knowledge;
    if (!k.stage.empty()) out << "- stage: " << k.stage << "\n";
    if (!k.check.empty()) out << "- check: " << k.check << "\n";
    if (!k.consequence.empty()) out << "- consequence: " << k.consequence << "\n";
    for (const auto& s : k.suggestions) {
      out << "- suggestion: " << s.text << "\n";
      for (const auto& manner : s.manners) out << "  - manner: " << manner << "\n";
    }
  }
  out << "- findings:\n";
  for (const auto& f : item.findings)
    out << "  - `" << f.detector_id << "` at `" << f.location << "` [" << to_string(f.status)
        << "]\n";
  if (item.knowledge) {
    render_example_block(out, "good example", item.knowledge->good_examples);
    render_example_block(out, "bad example", item.knowledge->bad_examples);
  }
  out << "\n";
}

}  // namespace

std::string render_report_markdown(const FsmSpec& spec, const std::string& kg_version,
                                   const std::vector<EvaluatedFinding>& evaluated,
                                   const RetrievalResult& retrieval) {
  std::ostringstream out;
  const Counts c = count_statuses(evaluated);

  out << "# Security Analysis Report\n\n";
  out << "- tool: " << kToolName << " " << kToolVersion << "\n";
  out << "- machine: `" << spec.name << "` (" << to_string(spec.kind) << ", "
      << spec.states.size() << " states, " << spec.transitions.size() << " transitions)\n";
  out << "- knowledge graph: version " << kg_version << "\n";
  out << "- findings: " << c.total << " total, " << c.confirmed << " confirmed, "
      << c.unconfirmed << " unconfirmed, " << c.refuted << " refuted\n\n";

  out << "## Findings\n\n";
  bool any = false;
  for (const auto& ev : evaluated) {
    if (ev.finding.status == FindingStatus::Refuted) continue;
    render_finding_line(out, ev);
    any = true;
  }
  if (!any) out << "No findings.\n";
  out << "\n";

  out << "## Remediation Knowledge\n\n";
  if (retrieval.report_items.empty()) {
    out << "Nothing retrieved.\n\n";
  } else {
    for (const auto& item : retrieval.report_items) render_item(out, item);
  }

  if (!retrieval.refuted.empty()) {
    out << "## Appendix: Refuted Findings\n\n";
    for (const auto& ev : retrieval.refuted) {
      const auto& f = ev.finding;
      out << "- `" << f.detector_id << "` at `" << f.location << "`: " << f.evidence << "\n";
      if (!ev.note.empty()) out << "  - why refuted: " << ev.note << "\n";
    }
  }

  std::string text = out.str();
  while (text.size() >= 2 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n')
    text.pop_back();
  return text;
}

namespace {

ordered_json finding_json(const Finding& f) {
  ordered_json j;
  j["detector_id"] = f.detector_id;
  j["vuln_id"] = f.vuln_id;
  j["phase"] = to_string(f.phase);
  j["location"] = f.location;
  j["evidence"] = f.evidence;
  j["status"] = to_string(f.status);
  return j;
}

}  // namespace

std::string render_report_json(const FsmSpec& spec, const std::string& kg_version,
                               const std::vector<EvaluatedFinding>& evaluated,
                               const RetrievalResult& retrieval) {
  const Counts c = count_statuses(evaluated);
  ordered_json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["machine"] = {{"name", spec.name},
                  {"kind", to_string(spec.kind)},
                  {"states", spec.states.size()},
                  {"transitions", spec.transitions.size()}};
  j["kg_version"] = kg_version;
  j["summary"] = {{"total", c.total},
                  {"confirmed", c.confirmed},
                  {"unconfirmed", c.unconfirmed},
                  {"refuted", c.refuted}};

  j["findings"] = ordered_json::array();
  for (const auto& ev : evaluated) {
    if (ev.finding.status == FindingStatus::Refuted) continue;
    ordered_json f = finding_json(ev.finding);
    if (!ev.note.empty()) f["note"] = ev.note;
    j["findings"].push_back(std::move(f));
  }

  j["knowledge"] = ordered_json::array();
  for (const auto& item : retrieval.report_items) {
    ordered_json k;
    k["vuln_id"] = item.vuln_id;
    k["markers"] = item.markers;
    if (item.knowledge) {
      k["stage"] = item.knowledge->stage;
      k["type"] = item.knowledge->type;
      k["check"] = item.knowledge->check;
      k["consequence"] = item.knowledge->consequence;
      k["suggestions"] = ordered_json::array();
      for (const auto& s : item.knowledge->suggestions)
        k["suggestions"].push_back({{"text", s.text}, {"manners", s.manners}});
      k["good_examples"] = item.knowledge->good_examples;
      k["bad_examples"] = item.knowledge->bad_examples;
    }
    k["findings"] = ordered_json::array();
    for (const auto& f : item.findings) k["findings"].push_back(finding_json(f));
    j["knowledge"].push_back(std::move(k));
  }

  j["refuted"] = ordered_json::array();
  for (const auto& ev : retrieval.refuted) {
    ordered_json f = finding_json(ev.finding);
    if (!ev.note.empty()) f["note"] = ev.note;
    j["refuted"].push_back(std::move(f));
  }

  return j.dump(2) + "\n";
}

}  // namespace fsmguard
