#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nsk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> artifacts;
  nlohmann::json summary = nlohmann::json::object();
};

/// Parses args (without the program name) and runs one subcommand. The
/// summary JSON goes to out; one-line diagnostics go to err.
CommandResult run(const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err);

}  // namespace nsk::cli
