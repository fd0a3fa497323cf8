#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lincnf {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFails = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitBudget = 3;

// Entry point of the `lincnf` tool; `args` excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace lincnf
