#pragma once

#include <string>

namespace funclearn {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Verbosity from FUNCLEARN_LOG (error|info|debug), read once; default info.
LogLevel log_level();

void log_error(const std::string& msg);
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

} // namespace funclearn
