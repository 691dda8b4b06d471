#pragma once

namespace dnlat {

inline constexpr const char* kVersion = "dnlat 0.1.0";

}
