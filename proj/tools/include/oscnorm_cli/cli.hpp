#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oscnorm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Subcommands: gen, norms, sobolev, verify, oracle, rearrange. Errors go to
// `err` prefixed with "usage error:", "invalid input:" or "file error:".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oscnorm::cli
