#pragma once

#include <string_view>

namespace sieve {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

void set_log_level(LogLevel level);
LogLevel log_level();

// Writes "[level] message" to stderr when level >= the current threshold.
void log(LogLevel level, std::string_view message);

}  // namespace sieve
