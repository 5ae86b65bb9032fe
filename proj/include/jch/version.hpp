#pragma once

namespace jch {
inline constexpr const char* tool_name = "jchsim";
inline constexpr const char* tool_version = "0.1.0";
}  // namespace jch
