#pragma once

#include <iosfwd>

namespace slt {

// Exit status: 0 success, 1 usage error, 2 data or input error, 3 numerical
// failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slt
