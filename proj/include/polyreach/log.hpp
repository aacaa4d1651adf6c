#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace polyreach {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

namespace detail {
inline LogLevel& log_level_ref() {
  static LogLevel level = [] {
    // REACH_LOG overrides whatever the program configured.
    if (const char* env = std::getenv("REACH_LOG")) {
      std::string s(env);
      if (s == "error") return LogLevel::kError;
      if (s == "warn") return LogLevel::kWarn;
      if (s == "info") return LogLevel::kInfo;
      if (s == "debug") return LogLevel::kDebug;
    }
    return LogLevel::kWarn;
  }();
  return level;
}
}  // namespace detail

inline LogLevel log_level() { return detail::log_level_ref(); }

inline void set_log_level(LogLevel level) {
  if (std::getenv("REACH_LOG") != nullptr) return;  // env wins
  detail::log_level_ref() = level;
}

inline void log_msg(LogLevel level, const std::string& msg) {
  if (level > log_level()) return;
  const char* tag = "info";
  switch (level) {
    case LogLevel::kError: tag = "error"; break;
    case LogLevel::kWarn: tag = "warn"; break;
    case LogLevel::kInfo: tag = "info"; break;
    case LogLevel::kDebug: tag = "debug"; break;
  }
  std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

inline void log_warn(const std::string& msg) { log_msg(LogLevel::kWarn, msg); }
inline void log_info(const std::string& msg) { log_msg(LogLevel::kInfo, msg); }
inline void log_debug(const std::string& msg) { log_msg(LogLevel::kDebug, msg); }

}  // namespace polyreach
