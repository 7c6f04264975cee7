#pragma once

namespace groupfb {

inline constexpr const char* kToolName = "groupfb";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace groupfb
