#pragma once

#include <filesystem>
#include <iosfwd>

namespace hybridyn::experiments {

enum ExitCode : int {
  kOk = 0,
  kSchemaError = 1,
  kNumericalFailure = 2,
  kAcceptanceFailure = 3,
};

// Output paths in the config are resolved against the config file's
// directory. Defaults: <stem>.csv and <stem>.summary.json next to it.
int run_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);
int validate_command(const std::filesystem::path& config_path, std::ostream& out,
                     std::ostream& err);

const char* version() noexcept;

}  // namespace hybridyn::experiments
