#pragma once

#include <string>
#include <vector>

#include "fsmguard/fsm.hpp"
#include "fsmguard/retrieval.hpp"

namespace fsmguard {

// Human-readable report: header, findings (refuted ones appear only in the
// appendix), remediation knowledge per vulnerability, appendix. Byte-stable
// for identical inputs.
std::string render_report_markdown(const FsmSpec& spec, const std::string& kg_version,
                                   const std::vector<EvaluatedFinding>& evaluated,
                                   const RetrievalResult& retrieval);

// The same content as a machine-readable document.
std::string render_report_json(const FsmSpec& spec, const std::string& kg_version,
                               const std::vector<EvaluatedFinding>& evaluated,
                               const RetrievalResult& retrieval);

}  // namespace fsmguard
