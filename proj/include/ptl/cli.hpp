#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ptl::cli {

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Process environment lookup (getenv).
std::optional<std::string> system_env(const std::string& name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = system_env);

}  // namespace ptl::cli
