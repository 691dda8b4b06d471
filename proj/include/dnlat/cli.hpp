#pragma once

#include <string>
#include <vector>

namespace dnlat {

// Full command-line front end. Args exclude the program name.
// Exit codes: 0 success, 1 hypothesis/validation failure, 2 numerical
// failure (blow-up or step underflow).
int run_cli(const std::vector<std::string>& args);

} // namespace dnlat
