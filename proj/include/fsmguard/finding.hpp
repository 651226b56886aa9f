#pragma once

#include <string>
#include <vector>

namespace fsmguard {

enum class Phase { Structural, Potential };

enum class FindingStatus { Raw, Confirmed, Refuted, Unconfirmed };

struct Finding {
  std::string detector_id;
  std::string vuln_id;
  Phase phase = Phase::Structural;
  std::string location;
  std::string evidence;
  FindingStatus status = FindingStatus::Raw;

  friend bool operator==(const Finding&, const Finding&) = default;
};

const char* to_string(Phase p);
const char* to_string(FindingStatus s);

// Stable report order: detector, then location, then evidence.
bool finding_less(const Finding& a, const Finding& b);
void sort_findings(std::vector<Finding>& findings);

std::string findings_to_json(const std::vector<Finding>& findings);
std::vector<Finding> findings_from_json(const std::string& text);

}  // namespace fsmguard
