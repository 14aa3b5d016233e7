#pragma once

#include <string>

namespace cavesim {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Quiet = 3 };

/// Verbosity from the CAVESIM_LOG environment variable
/// (debug | info | warn | quiet); defaults to Info.
LogLevel log_level();

void log_debug(const std::string& msg);
void log_info(const std::string& msg);
void log_warn(const std::string& msg);

}  // namespace cavesim
