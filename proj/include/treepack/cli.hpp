#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace treepack::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kInfeasible = 2;
inline constexpr int kResource = 3;

// Runs one command line (without the program name). `in` backs `--input -`.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace treepack::cli
