#include "funclearn/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace funclearn {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("FUNCLEARN_LOG");
        if (env == nullptr) return LogLevel::info;
        const std::string v(env);
        if (v == "error") return LogLevel::error;
        if (v == "debug") return LogLevel::debug;
        return LogLevel::info;
    }();
    return level;
}

namespace {

std::mutex& log_mutex() {
    static std::mutex m;
    return m;
}

void emit(LogLevel at, const char* tag, const std::string& msg) {
    if (log_level() < at) return;
    std::lock_guard<std::mutex> lock(log_mutex());
    std::cerr << tag << msg << std::endl;
}

} // namespace

void log_error(const std::string& msg) { emit(LogLevel::error, "[error] ", msg); }
void log_info(const std::string& msg) { emit(LogLevel::info, "[info] ", msg); }
void log_debug(const std::string& msg) { emit(LogLevel::debug, "[debug] ", msg); }

} // namespace funclearn
