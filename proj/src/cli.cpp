#include "jch/cli.hpp"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <fstream>
#include <ostream>
#include <thread>
#include <vector>

#include "jch/config.hpp"
#include "jch/error.hpp"
#include "jch/output.hpp"
#include "jch/version.hpp"

namespace jch {
namespace {

ExperimentMode mode_for(const std::string& subcommand) {
  if (subcommand == "trace") return ExperimentMode::msd_trace;
  if (subcommand == "snapshot") return ExperimentMode::snapshot;
  if (subcommand == "sweep") return ExperimentMode::dcf_sweep;
  throw ConfigError("unknown subcommand '" + subcommand + "' (expected trace, snapshot, sweep or run)");
}

struct Override {
  std::string key;
  std::string previous;
  std::string value;
};

struct Resolved {
  std::string subcommand;
  ParsedConfig config;
  std::size_t workers = 1;
  std::vector<Override> overrides;
};

Resolved resolve(const CommandOptions& options) {
  Resolved r;
  std::optional<std::size_t> manifest_workers;
  if (options.subcommand == "run") {
    if (!options.from_manifest) throw ConfigError("run requires --from-manifest <path>");
    YAML::Node manifest;
    try {
      manifest = YAML::LoadFile(options.from_manifest->string());
    } catch (const YAML::BadFile&) {
      throw IoError("cannot read manifest " + options.from_manifest->string());
    } catch (const YAML::Exception& e) {
      throw ConfigError("malformed manifest: line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!manifest["command"] || !manifest["spec"]) throw ConfigError("manifest lacks 'command' or 'spec'");
    r.subcommand = manifest["command"].as<std::string>();
    r.config = parse_config_node(manifest["spec"], mode_for(r.subcommand));
    if (manifest["workers"]) manifest_workers = manifest["workers"].as<std::size_t>();
  } else {
    if (options.from_manifest) throw ConfigError("--from-manifest is only valid with the run subcommand");
    r.subcommand = options.subcommand;
    const ExperimentMode mode = mode_for(r.subcommand);
    r.config = options.config ? parse_config_file(*options.config, mode) : parse_config("", mode);
  }

  if (options.seed && *options.seed != r.config.seed) {
    r.overrides.push_back({"seed", std::to_string(r.config.seed), std::to_string(*options.seed)});
    r.config.seed = *options.seed;
    apply_seed(r.config.spec, r.config.seed);
  }
  if (options.workers) {
    if (*options.workers < 1) throw ConfigError("--workers must be >= 1");
    r.workers = *options.workers;
  } else if (manifest_workers) {
    r.workers = *manifest_workers;
  } else {
    r.workers = std::max(1u, std::thread::hardware_concurrency());
  }
  return r;
}

void write_manifest(const std::filesystem::path& path, const Resolved& r, const std::filesystem::path& artifact,
                    double wall_seconds) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "tool" << YAML::Value << tool_name;
  out << YAML::Key << "version" << YAML::Value << tool_version;
  out << YAML::Key << "command" << YAML::Value << r.subcommand;
  out << YAML::Key << "seed" << YAML::Value << r.config.seed;
  out << YAML::Key << "workers" << YAML::Value << r.workers;
  out << YAML::Key << "outputs" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "artifact" << YAML::Value << artifact.string();
  out << YAML::Key << "manifest" << YAML::Value << path.string();
  out << YAML::EndMap;
  out << YAML::Key << "overrides" << YAML::Value << YAML::BeginSeq;
  for (const auto& o : r.overrides)
    out << YAML::BeginMap << YAML::Key << "key" << YAML::Value << o.key << YAML::Key << "config_value"
        << YAML::Value << o.previous << YAML::Key << "cli_value" << YAML::Value << o.value << YAML::EndMap;
  out << YAML::EndSeq;
  out << YAML::Key << "timings" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "wall_seconds" << YAML::Value << wall_seconds;
  out << YAML::EndMap;
  out << YAML::Key << "spec" << YAML::Value << config_to_node(r.config);
  out << YAML::EndMap;

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path.string());
  file << out.c_str() << '\n';
  if (!file) throw IoError("write failed for " + path.string());
}

int execute(const CommandOptions& options, std::ostream& log) {
  const Resolved r = resolve(options);
  const ExperimentSpec& spec = r.config.spec;

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec || !std::filesystem::is_directory(options.out_dir))
    throw IoError("cannot create output directory " + options.out_dir.string());

  ProgressFn progress;
  if (options.progress)
    progress = [&log](std::size_t done, std::size_t total) {
      log << "\r  " << done << '/' << total << " samples" << (done == total ? "\n" : "") << std::flush;
    };

  log << tool_name << ' ' << r.subcommand << ": " << spec.samples << " samples, N=" << spec.lattice.num_sites
      << ", workers=" << r.workers << '\n';
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::path artifact;
  switch (spec.mode) {
    case ExperimentMode::msd_trace:
      artifact = options.out_dir / "msd_trace.csv";
      write_msd_trace_csv(artifact, run_ensemble(spec, r.workers, progress));
      break;
    case ExperimentMode::snapshot:
      artifact = options.out_dir / "snapshots.csv";
      write_snapshots_csv(artifact, run_ensemble(spec, r.workers, progress));
      break;
    case ExperimentMode::dcf_sweep:
      artifact = options.out_dir / "sweep.csv";
      write_sweep_csv(artifact, sweep_dcf(spec, r.workers, progress), spec.sweep.measure_time);
      break;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(options.out_dir / "manifest.yaml", r, artifact, wall);
  log << "wrote " << artifact.string() << " (" << wall << " s)\n";
  return 0;
}

}  // namespace

int run_command(const CommandOptions& options, std::ostream& log) {
  try {
    return execute(options, log);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::io);
  } catch (const YAML::Exception& e) {
    log << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::config);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::numerical);
  }
}

}  // namespace jch
