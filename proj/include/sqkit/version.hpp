#pragma once

namespace sqkit {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "sqkit";

}  // namespace sqkit
