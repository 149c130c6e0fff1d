#pragma once

#include <cstdarg>
#include <cstdio>
#include <string_view>

namespace trey::util {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

inline LogLevel& log_level() {
    static LogLevel level = LogLevel::Info;
    return level;
}

inline LogLevel parse_log_level(std::string_view s) {
    if (s == "debug") return LogLevel::Debug;
    if (s == "info") return LogLevel::Info;
    if (s == "warn") return LogLevel::Warn;
    if (s == "error") return LogLevel::Error;
    return LogLevel::Info;
}

inline void logf(LogLevel lvl, const char* tag, const char* fmt, ...) {
    if (lvl < log_level()) return;
    std::fprintf(stderr, "[%s] ", tag);
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

#define TREY_LOG_DEBUG(...) ::trey::util::logf(::trey::util::LogLevel::Debug, "debug", __VA_ARGS__)
#define TREY_LOG_INFO(...) ::trey::util::logf(::trey::util::LogLevel::Info, "info", __VA_ARGS__)
#define TREY_LOG_WARN(...) ::trey::util::logf(::trey::util::LogLevel::Warn, "warn", __VA_ARGS__)
#define TREY_LOG_ERROR(...) ::trey::util::logf(::trey::util::LogLevel::Error, "error", __VA_ARGS__)

}  // namespace trey::util
