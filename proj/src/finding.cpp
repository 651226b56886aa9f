#include "fsmguard/finding.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

#include "fsmguard/diag.hpp"

namespace fsmguard {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Phase p) {
  return p == Phase::Structural ? "structural" : "potential";
}

const char* to_string(FindingStatus s) {
  switch (s) {
    case FindingStatus::Raw: return "raw";
    case FindingStatus::Confirmed: return "confirmed";
    case FindingStatus::Refuted: return "refuted";
    case FindingStatus::Unconfirmed: return "unconfirmed";
  }
  return "raw";
}

bool finding_less(const Finding& a, const Finding& b) {
  return std::tie(a.detector_id, a.location, a.evidence) <
         std::tie(b.detector_id, b.location, b.evidence);
}

void sort_findings(std::vector<Finding>& findings) {
  std::stable_sort(findings.begin(), findings.end(), finding_less);
}

std::string findings_to_json(const std::vector<Finding>& findings) {
  ordered_json arr = ordered_json::array();
  for (const auto& f : findings) {
    ordered_json j;
    j["detector_id"] = f.detector_id;
    j["vuln_id"] = f.vuln_id;
    j["phase"] = to_string(f.phase);
    j["location"] = f.location;
    j["evidence"] = f.evidence;
    j["status"] = to_string(f.status);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

namespace {

Phase phase_from(const std::string& s) {
  if (s == "structural") return Phase::Structural;
  if (s == "potential") return Phase::Potential;
  throw ParseError({"syntax-error", "unknown phase '" + s + "'"});
}

FindingStatus status_from(const std::string& s) {
  if (s == "raw") return FindingStatus::Raw;
  if (s == "confirmed") return FindingStatus::Confirmed;
  if (s == "refuted") return FindingStatus::Refuted;
  if (s == "unconfirmed") return FindingStatus::Unconfirmed;
  throw ParseError({"syntax-error", "unknown finding status '" + s + "'"});
}

std::string need_string(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw ParseError({"syntax-error",
                      std::string("finding is missing string field \"") + key + "\""});
  return j[key].get<std::string>();
}

}  // namespace

std::vector<Finding> findings_from_json(const std::string& text) {
  ordered_json arr;
  try {
    arr = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError({"syntax-error", e.what()});
  }
  if (!arr.is_array())
    throw ParseError({"syntax-error", "findings document must be a JSON array"});
  std::vector<Finding> out;
  for (const auto& j : arr) {
    if (!j.is_object())
      throw ParseError({"syntax-error", "findings array entries must be objects"});
    Finding f;
    f.detector_id = need_string(j, "detector_id");
    f.vuln_id = need_string(j, "vuln_id");
    f.phase = phase_from(need_string(j, "phase"));
    f.location = need_string(j, "location");
    f.evidence = need_string(j, "evidence");
    f.status = j.contains("status") ? status_from(need_string(j, "status"))
                                    : FindingStatus::Raw;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace fsmguard
