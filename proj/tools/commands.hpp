#pragma once

#include <string>
#include <vector>

namespace stvac::cli {

// exit codes
inline constexpr int kPass = 0;
inline constexpr int kInputError = 1;
inline constexpr int kToleranceFailure = 2;

// environment variable naming the default output directory
inline constexpr const char* kOutputDirEnv = "STVAC_OUTPUT_DIR";

// runs the tool on argv-style arguments (args[0] is the program name)
int run(const std::vector<std::string>& args);

// writes the reference inputs into `dir`; returns the file names
std::vector<std::string> write_fixtures(const std::string& dir);

}  // namespace stvac::cli
