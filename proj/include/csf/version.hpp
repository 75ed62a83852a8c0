#pragma once

namespace csf {

inline constexpr const char* kToolName = "csf";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace csf
