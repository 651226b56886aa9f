#pragma once

namespace fsmguard {

inline constexpr const char* kToolName = "fsmguard";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace fsmguard
