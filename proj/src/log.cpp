#include "compminer/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace compminer {

namespace {

LogLevel level_from_env() {
    const char* env = std::getenv("COMPOSITE_MINER_LOG");
    if (env == nullptr) return LogLevel::Warn;
    const std::string value(env);
    if (value == "error") return LogLevel::Error;
    if (value == "warn") return LogLevel::Warn;
    if (value == "info") return LogLevel::Info;
    if (value == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

std::string_view label(LogLevel level) {
    switch (level) {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        case LogLevel::Debug: return "debug";
    }
    return "";
}

}  // namespace

LogLevel log_level() {
    static const LogLevel level = level_from_env();
    return level;
}

void log_message(LogLevel level, std::string_view message) {
    if (level > log_level()) return;
    std::cerr << "[" << label(level) << "] " << message << "\n";
}

}  // namespace compminer
