#pragma once

namespace geonet {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "geonet";

}  // namespace geonet
