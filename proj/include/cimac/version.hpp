#pragma once

namespace cimac {

inline constexpr const char* kToolName = "cimac";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace cimac
