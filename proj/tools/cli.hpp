#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sieve::cli {

// Exit codes of the sieve command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

// Runs the command line `args` (args[0] is the program name). Human-readable
// output goes to `out`, diagnostics to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// Parses a `key = value` config file. Blank lines and lines starting with '#'
// are ignored. Throws DataError on a malformed line.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace sieve::cli
