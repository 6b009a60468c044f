#include "sieve/log.hpp"

#include <atomic>
#include <iostream>

namespace sieve {

namespace {
std::atomic<LogLevel> g_level{LogLevel::Warn};

const char* label(LogLevel level) {
  switch (level) {
    case LogLevel::Debug: return "debug";
    case LogLevel::Info: return "info";
    case LogLevel::Warn: return "warn";
    case LogLevel::Error: return "error";
    case LogLevel::Off: break;
  }
  return "";
}
}  // namespace

void set_log_level(LogLevel level) { g_level.store(level); }
LogLevel log_level() { return g_level.load(); }

void log(LogLevel level, std::string_view message) {
  if (level < g_level.load() || level == LogLevel::Off) return;
  std::cerr << '[' << label(level) << "] " << message << '\n';
}

}  // namespace sieve
