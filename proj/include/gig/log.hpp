#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace gig {

enum class LogLevel { silent = 0, warn = 1, info = 2, debug = 3 };

// GIG_LOG=silent|warn|info|debug (default warn)
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("GIG_LOG");
    if (!env) return LogLevel::warn;
    if (std::strcmp(env, "silent") == 0) return LogLevel::silent;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

template <typename... Args>
void log_at(LogLevel lvl, const char* tag, const char* fmt, Args... args) {
  if (static_cast<int>(lvl) > static_cast<int>(log_level())) return;
  std::fprintf(stderr, "[%s] ", tag);
  std::fprintf(stderr, fmt, args...);
  std::fprintf(stderr, "\n");
}

#define GIG_WARN(...) ::gig::log_at(::gig::LogLevel::warn, "warn", __VA_ARGS__)
#define GIG_INFO(...) ::gig::log_at(::gig::LogLevel::info, "info", __VA_ARGS__)
#define GIG_DEBUG(...) ::gig::log_at(::gig::LogLevel::debug, "debug", __VA_ARGS__)

}  // namespace gig
