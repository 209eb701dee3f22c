#pragma once

#include <string>

namespace soliton {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

/// Threshold from SOLITON_LOG (error, info, debug); defaults to error.
LogLevel log_level();
void log_message(LogLevel level, const std::string& msg);

}  // namespace soliton
