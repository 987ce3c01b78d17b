#pragma once

namespace spdc {

inline constexpr const char* tool_name = "spdc-sim";
inline constexpr const char* tool_version = "1.0.0";

}  // namespace spdc
