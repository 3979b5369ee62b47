#pragma once

namespace maxtorus {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kFormatVersion = "1";

}  // namespace maxtorus
