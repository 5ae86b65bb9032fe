#pragma once

// Experiment configuration files (YAML). Every key is optional; omitted
// values fall back to the reference parameters (coupling 10 kappa, resonance,
// 500 samples, horizon 100 / kappa). Unknown keys are rejected with the line
// on which they appear. Energies are in units of kappa, times in 1 / kappa.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "jch/ensemble.hpp"

namespace YAML {
class Node;
}

namespace jch {

struct ParsedConfig {
  ExperimentSpec spec;
  std::uint64_t seed = 1;
};

/// Sets the master seed on every disorder stream of `spec`.
void apply_seed(ExperimentSpec& spec, std::uint64_t seed);

/// Parses and validates a config. `mode` (from the CLI subcommand) must agree
/// with a `mode:` key when both are present. A `num_sites: auto` lattice is
/// sized with auto_size_lattice.
ParsedConfig parse_config(std::string_view text, std::optional<ExperimentMode> mode = std::nullopt);
ParsedConfig parse_config_file(const std::filesystem::path& path, std::optional<ExperimentMode> mode = std::nullopt);
ParsedConfig parse_config_node(const YAML::Node& root, std::optional<ExperimentMode> mode = std::nullopt);

/// Fully materialised config; parse_config(emit_config(c)) reproduces c exactly.
YAML::Node config_to_node(const ParsedConfig& config);
std::string emit_config(const ParsedConfig& config);

}  // namespace jch
