#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace fusion {

// FUSION_LOG={error,info,debug}; default info.
enum class LogLevel { error = 0, info = 1, debug = 2 };

inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("FUSION_LOG");
        if (!env) return LogLevel::info;
        if (std::strcmp(env, "error") == 0) return LogLevel::error;
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        return LogLevel::info;
    }();
    return level;
}

inline void log_error(const std::string& msg) {
    std::fprintf(stderr, "[error] %s\n", msg.c_str());
}

inline void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) std::fprintf(stderr, "[info] %s\n", msg.c_str());
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::debug) std::fprintf(stderr, "[debug] %s\n", msg.c_str());
}

} // namespace fusion
