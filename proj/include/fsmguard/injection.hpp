#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsmguard/fsm.hpp"

namespace fsmguard {

enum class InjectionClass { Coding, Structural, Potential };

const char* to_string(InjectionClass c);
std::optional<InjectionClass> injection_class_from(const std::string& name);

struct InjectionVariant {
  const char* name;
  InjectionClass klass;
  const char* detector_id;  // detector expected to flag the planted defect
};

// Every plantable defect. Spec-level variants mutate the machine; the
// missing-default variant renders Verilog instead.
const std::vector<InjectionVariant>& injection_variants();
const InjectionVariant* find_variant(const std::string& name);

struct InjectionRecipe {
  InjectionClass klass = InjectionClass::Structural;
  std::string variant;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::string detector_id;
  std::string location;
  InjectionRecipe recipe;
};

struct InjectionResult {
  FsmSpec spec;                        // mutated machine (unchanged for verilog-level variants)
  std::optional<std::string> verilog;  // set only by verilog-level variants
  GroundTruth truth;
  std::vector<std::string> edits;      // one line per applied edit
};

// Plants exactly the recipe's defect into a copy of the machine and reports
// where the matching detector must fire. The seed drives every random choice.
// Throws std::invalid_argument for unknown variants, a class that does not
// match the variant, or a machine the variant cannot apply to.
InjectionResult inject(const FsmSpec& clean, const InjectionRecipe& recipe);

// Small machine with no findings under every registered detector: ring
// topology, guarded transitions, constant or pass-through outputs, no
// encodings. Deterministic per seed.
FsmSpec generate_random_spec(std::uint64_t seed);

}  // namespace fsmguard
