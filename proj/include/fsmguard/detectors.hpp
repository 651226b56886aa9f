#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fsmguard/finding.hpp"
#include "fsmguard/graph.hpp"

namespace fsmguard {

struct DetectorInfo {
  std::string id;
  std::string vuln_id;
  Phase phase = Phase::Structural;
  std::function<std::vector<Finding>(const SecurityStateGraph&)> run;
};

// All detectors, ordered by id. Structural detectors flag defects visible in
// the state graph alone; potential detectors flag risks that need a second
// look against the knowledge base before they count.
const std::vector<DetectorInfo>& detector_registry();

const DetectorInfo* find_detector(const std::string& id);

// Runs every registered detector and returns the merged findings in report
// order. All findings come back with status raw.
std::vector<Finding> pre_analyze(const SecurityStateGraph& g);

// Edge index rendered as a stable location token, e.g. "transition:0007".
std::string transition_location(std::size_t edge_index);

// Unordered state pair rendered in declaration order, e.g. "(IDLE,BUSY)".
std::string pair_location(const std::string& a, const std::string& b);

}  // namespace fsmguard
