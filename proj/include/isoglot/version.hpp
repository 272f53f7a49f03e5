#pragma once

namespace isoglot {

inline constexpr const char* kToolName = "isoglot";
inline constexpr const char* kVersion = "0.1.0";

} // namespace isoglot
