#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jumpest {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the `jumpest` executable. args[0] is the program name.
// Returns 0 on success, 1 on validation or runtime failure, 2 on usage errors.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jumpest
