#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace jch {

/// Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O failure.
struct CommandOptions {
  std::string subcommand;  ///< trace | snapshot | sweep | run
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> from_manifest;
  bool progress = false;
};

/// Runs one experiment and writes its CSV artifact plus manifest.yaml into
/// out_dir. Diagnostics go to `log`; never throws.
int run_command(const CommandOptions& options, std::ostream& log);

}  // namespace jch
