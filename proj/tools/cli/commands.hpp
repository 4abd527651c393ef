#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rankcal::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes: 0 success, 1 runtime failure (a structured JSON error summary
// goes to `err`), 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int Run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rankcal::cli
