#include "soliton/log.hpp"

#include <cstdlib>
#include <iostream>
#include <string_view>

namespace soliton {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("SOLITON_LOG");
    const std::string_view v = env ? env : "";
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    return LogLevel::Error;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& msg) {
  if (level > log_level()) return;
  static constexpr const char* names[] = {"error", "info", "debug"};
  std::cerr << "[" << names[static_cast<int>(level)] << "] " << msg << '\n';
}

}  // namespace soliton
