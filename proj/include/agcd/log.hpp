#pragma once
// Minimal stderr logger controlled by the AGCD_LOG environment variable
// (quiet | info | debug, default quiet). Logs never touch stdout so that
// machine-readable output stays clean.

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace agcd {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("AGCD_LOG");
        if (env == nullptr) return LogLevel::Quiet;
        const std::string_view v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        return LogLevel::Quiet;
    }();
    return level;
}

inline bool log_enabled(LogLevel lvl) {
    return static_cast<int>(log_level()) >= static_cast<int>(lvl);
}

inline void log_info(const std::string& msg) {
    if (log_enabled(LogLevel::Info)) std::cerr << "[agcd] " << msg << '\n';
}

inline void log_debug(const std::string& msg) {
    if (log_enabled(LogLevel::Debug)) std::cerr << "[agcd:debug] " << msg << '\n';
}

}  // namespace agcd
