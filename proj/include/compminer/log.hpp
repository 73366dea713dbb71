#pragma once

#include <string_view>

namespace compminer {

enum class LogLevel {
    Error = 0,
    Warn = 1,
    Info = 2,
    Debug = 3,
};

/// Threshold from COMPOSITE_MINER_LOG (error|warn|info|debug), default warn.
LogLevel log_level();

void log_message(LogLevel level, std::string_view message);

inline void log_error(std::string_view message) { log_message(LogLevel::Error, message); }
inline void log_warn(std::string_view message) { log_message(LogLevel::Warn, message); }
inline void log_info(std::string_view message) { log_message(LogLevel::Info, message); }
inline void log_debug(std::string_view message) { log_message(LogLevel::Debug, message); }

}  // namespace compminer
