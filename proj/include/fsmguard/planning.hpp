#pragma once

#include <array>
#include <string>

#include "fsmguard/fsm.hpp"
#include "fsmguard/retrieval.hpp"

namespace fsmguard {

// The generation prompt always walks the design in this fixed order.
inline constexpr std::array<const char*, 5> kPromptSectionNames = {
    "Input-Output Interface",
    "State Encoding and Associated Declarations",
    "State Transition Logic",
    "State Update Logic",
    "State Output Logic",
};

struct PromptSection {
  std::string name;
  std::string body;
};

struct PromptTemplate {
  std::array<PromptSection, 5> sections;
};

// Turns the machine into the five requirement sections.
PromptTemplate build_template(const FsmSpec& spec);

// "### Section N: <name>" blocks in order.
std::string render_sections(const PromptTemplate& t);

// Full generation prompt: fixed preamble, the coding-stage security knowledge
// pulled by retrieval, then the five sections.
std::string assemble_security_prompt(const FsmSpec& spec, const RetrievalResult& retrieval);

}  // namespace fsmguard
