#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccn::cli {

// Exit codes: 0 success, 1 violation or divergence, 2 usage or parse error.
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kUsage = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ccn::cli
