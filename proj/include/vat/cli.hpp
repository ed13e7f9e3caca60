#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vat {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitIo = 3;

// Runs the command line (without the program name). Results go to `out`
// unless --out names a file; notes and diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "4096", "8KiB", "64MiB", "1GiB" (powers of two). Throws std::invalid_argument.
std::uint64_t parse_size(const std::string& text);

}  // namespace vat
