#pragma once

#include <filesystem>
#include <string>

#include "sqz/config.hpp"

namespace sqz {

enum ExitCode { kExitOk = 0, kExitValidation = 2, kExitCertification = 3, kExitNumerical = 4 };

// Each command writes into its own directory and returns an exit code.
// Exceptions escape; run_command maps them to exit codes.
int cmd_build(const RunConfig& c, const std::filesystem::path& out);
int cmd_certify_smoothed(const RunConfig& c, const std::filesystem::path& out);
int cmd_estimate(const RunConfig& c, const std::filesystem::path& out);
int cmd_plotdata(const RunConfig& c, const std::filesystem::path& out);
int cmd_all(const RunConfig& c, const std::filesystem::path& out);

// Validates, takes the directory lock, dispatches and maps errors.
int run_command(const std::string& name, const RunConfig& c);

enum class LogLevel { Quiet, Info, Debug };
LogLevel log_level();  // from SQUEEZE_LOG: quiet | info | debug
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace sqz
