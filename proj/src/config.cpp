#include "jch/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "jch/error.hpp"

namespace jch {
namespace {

std::string where(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.line < 0) return "";
  return "line " + std::to_string(mark.line + 1) + ": ";
}

// Section reader that tracks consumed keys so leftovers can be reported.
class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw ConfigError(where(node_) + "'" + path_ + "' must be a mapping");
  }

  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return has(key) ? node_[key] : YAML::Node();
  }

  template <typename T>
  std::optional<T> get(const std::string& key) {
    const YAML::Node v = raw(key);
    if (!v || v.IsNull()) return std::nullopt;
    try {
      return v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(v) + "invalid value for '" + qualified(key) + "'");
    }
  }

  /// Non-negative integer, or nullopt for the literal `auto`.
  std::optional<std::size_t> get_size_or_auto(const std::string& key) {
    const YAML::Node v = raw(key);
    if (!v || v.IsNull()) return std::nullopt;
    if (v.IsScalar() && v.Scalar() == "auto") return std::nullopt;
    try {
      const auto x = v.as<long long>();
      if (x < 0) throw ConfigError(where(v) + "'" + qualified(key) + "' must be non-negative");
      return static_cast<std::size_t>(x);
    } catch (const YAML::Exception&) {
      throw ConfigError(where(v) + "invalid value for '" + qualified(key) + "' (integer or auto)");
    }
  }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const YAML::Node& node() const { return node_; }

  void reject_unknown() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError(where(kv.first) + "unknown key '" + qualified(key) + "'");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const Section& s, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(where(s.node()) + "'" + s.qualified(key) + "' " + message);
}

}  // namespace

void apply_seed(ExperimentSpec& spec, std::uint64_t seed) {
  spec.dynamic.rng_seed = seed;
  if (spec.static_disorder) spec.static_disorder->rng_seed = seed;
}

ParsedConfig parse_config_node(const YAML::Node& root_node, std::optional<ExperimentMode> mode) {
  Section root(root_node, "");
  ParsedConfig out;
  ExperimentSpec& spec = out.spec;

  if (auto m = root.get<std::string>("mode")) {
    const ExperimentMode parsed = parse_experiment_mode(*m);
    if (mode && *mode != parsed)
      throw ConfigError("config mode '" + *m + "' conflicts with subcommand mode '" + std::string(to_string(*mode)) +
                        "'");
    spec.mode = parsed;
  } else if (mode) {
    spec.mode = *mode;
  }

  if (auto seed = root.get<std::uint64_t>("seed")) out.seed = *seed;
  if (auto samples = root.get<long long>("samples")) {
    require(*samples >= 1, root, "samples", "must be >= 1");
    spec.samples = static_cast<std::size_t>(*samples);
  }
  if (auto horizon = root.get<double>("horizon")) {
    require(*horizon > 0.0 && std::isfinite(*horizon), root, "horizon", "must be > 0");
    spec.horizon = *horizon;
  }

  Section lattice(root.raw("lattice"), "lattice");
  const auto num_sites = lattice.get_size_or_auto("num_sites");
  const auto initial_site = lattice.get_size_or_auto("initial_site");
  if (auto v = lattice.get<double>("kappa")) spec.lattice.kappa = *v;
  if (auto v = lattice.get<double>("coupling")) spec.lattice.coupling_baseline = *v;
  if (auto v = lattice.get<double>("detuning")) spec.lattice.detuning_baseline = *v;
  require(spec.lattice.kappa > 0.0, lattice, "kappa", "must be > 0");
  require(spec.lattice.coupling_baseline > 0.0, lattice, "coupling", "must be > 0");
  lattice.reject_unknown();

  const double coupling = spec.lattice.coupling_baseline;
  Section dynamic(root.raw("dynamic_disorder"), "dynamic_disorder");
  const double default_fraction = spec.mode == ExperimentMode::dcf_sweep ? 0.1 : 0.2;
  spec.dynamic.bound = dynamic.get<double>("bound").value_or(default_fraction * coupling);
  spec.dynamic.strength_std = dynamic.get<double>("strength_std").value_or(0.5 * spec.dynamic.bound);
  const auto tau = dynamic.get<double>("tau");
  const auto dcf = dynamic.get<double>("f_D");
  if (tau && dcf) throw ConfigError(where(dynamic.node()) + "give exactly one of dynamic_disorder.tau and f_D");
  if (tau) {
    require(*tau > 0.0, dynamic, "tau", "must be > 0");
    spec.dynamic.tau = *tau;
  } else if (dcf) {
    require(*dcf > 0.0, dynamic, "f_D", "must be > 0");
    spec.dynamic.tau = 1.0 / *dcf;
  } else {
    spec.dynamic.tau = 1.0;
  }
  dynamic.reject_unknown();

  if (root.has("static_disorder")) {
    Section st(root.raw("static_disorder"), "static_disorder");
    const bool enabled = st.get<bool>("enabled").value_or(true);
    StaticDisorderSpec s = default_static_disorder(coupling, out.seed);
    if (auto v = st.get<double>("bound")) s.bound = *v;
    s.strength_std = st.get<double>("strength_std").value_or(0.5 * s.bound);
    if (auto v = st.get<bool>("resample_per_sample")) s.resample_per_sample = *v;
    st.reject_unknown();
    if (enabled) spec.static_disorder = s;
  }

  Section record(root.raw("record"), "record");
  if (auto v = record.get<double>("t_min")) spec.record.t_min = *v;
  if (auto v = record.get<long long>("points_per_decade")) {
    require(*v >= 1, record, "points_per_decade", "must be >= 1");
    spec.record.points_per_decade = static_cast<std::size_t>(*v);
  }
  if (auto v = record.get<bool>("overlay_switching_grid")) spec.record.overlay_switching_grid = *v;
  record.reject_unknown();

  Section snapshot(root.raw("snapshot"), "snapshot");
  if (auto v = snapshot.get<std::vector<double>>("times")) spec.snapshot_times = *v;
  snapshot.reject_unknown();

  Section sweep(root.raw("sweep"), "sweep");
  spec.sweep.dcf_values = sweep.get<std::vector<double>>("dcf_values").value_or(default_dcf_grid());
  spec.sweep.measure_time = sweep.get<double>("measure_time").value_or(spec.horizon);
  sweep.reject_unknown();

  Section prop(root.raw("propagator"), "propagator");
  if (auto v = prop.get<std::string>("method")) spec.propagator.method = parse_propagation_method(*v);
  if (auto v = prop.get<long long>("krylov_dim")) {
    require(*v >= 2, prop, "krylov_dim", "must be >= 2");
    spec.propagator.krylov_dim = static_cast<std::size_t>(*v);
  }
  if (auto v = prop.get<long long>("chebyshev_order")) {
    require(*v >= 2, prop, "chebyshev_order", "must be >= 2");
    spec.propagator.chebyshev_order = static_cast<std::size_t>(*v);
  }
  if (auto v = prop.get<double>("substep")) spec.propagator.substep = *v;
  if (auto v = prop.get<double>("tolerance")) spec.propagator.tolerance = *v;
  if (auto v = prop.get<double>("norm_drift_limit")) spec.propagator.norm_drift_limit = *v;
  prop.reject_unknown();

  Section boundary(root.raw("boundary"), "boundary");
  if (auto v = boundary.get<long long>("margin")) {
    require(*v >= 0, boundary, "margin", "must be >= 0");
    spec.boundary.margin = static_cast<std::size_t>(*v);
  }
  if (auto v = boundary.get<double>("leak_threshold")) spec.boundary.leak_threshold = *v;
  boundary.reject_unknown();

  root.reject_unknown();
  apply_seed(spec, out.seed);

  // Sizing needs a valid propagator and horizon; check those first.
  spec.propagator.validate();
  if (num_sites) {
    spec.lattice.num_sites = *num_sites;
  } else {
    spec.lattice.num_sites = auto_size_lattice(spec);
  }
  spec.lattice.initial_site = initial_site.value_or(spec.lattice.num_sites / 2);
  spec.validate();
  return out;
}

ParsedConfig parse_config(std::string_view text, std::optional<ExperimentMode> mode) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("malformed config: line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  return parse_config_node(root, mode);
}

ParsedConfig parse_config_file(const std::filesystem::path& path, std::optional<ExperimentMode> mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str(), mode);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

YAML::Node config_to_node(const ParsedConfig& config) {
  const ExperimentSpec& spec = config.spec;
  YAML::Node n;
  n["mode"] = std::string(to_string(spec.mode));
  n["seed"] = config.seed;
  n["samples"] = spec.samples;
  n["horizon"] = spec.horizon;

  n["lattice"]["num_sites"] = spec.lattice.num_sites;
  n["lattice"]["initial_site"] = spec.lattice.initial_site;
  n["lattice"]["kappa"] = spec.lattice.kappa;
  n["lattice"]["coupling"] = spec.lattice.coupling_baseline;
  n["lattice"]["detuning"] = spec.lattice.detuning_baseline;

  n["dynamic_disorder"]["strength_std"] = spec.dynamic.strength_std;
  n["dynamic_disorder"]["bound"] = spec.dynamic.bound;
  n["dynamic_disorder"]["tau"] = spec.dynamic.tau;

  n["static_disorder"]["enabled"] = spec.static_disorder.has_value();
  if (spec.static_disorder) {
    n["static_disorder"]["strength_std"] = spec.static_disorder->strength_std;
    n["static_disorder"]["bound"] = spec.static_disorder->bound;
    n["static_disorder"]["resample_per_sample"] = spec.static_disorder->resample_per_sample;
  }

  n["record"]["t_min"] = spec.record.t_min;
  n["record"]["points_per_decade"] = spec.record.points_per_decade;
  n["record"]["overlay_switching_grid"] = spec.record.overlay_switching_grid;

  n["snapshot"]["times"] = spec.snapshot_times;
  n["sweep"]["dcf_values"] = spec.sweep.dcf_values;
  n["sweep"]["measure_time"] = spec.sweep.measure_time;

  n["propagator"]["method"] = std::string(to_string(spec.propagator.method));
  n["propagator"]["krylov_dim"] = spec.propagator.krylov_dim;
  n["propagator"]["chebyshev_order"] = spec.propagator.chebyshev_order;
  n["propagator"]["substep"] = spec.propagator.substep;
  n["propagator"]["tolerance"] = spec.propagator.tolerance;
  n["propagator"]["norm_drift_limit"] = spec.propagator.norm_drift_limit;

  n["boundary"]["margin"] = spec.boundary.margin;
  n["boundary"]["leak_threshold"] = spec.boundary.leak_threshold;
  return n;
}

std::string emit_config(const ParsedConfig& config) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << config_to_node(config);
  return std::string(out.c_str()) + "\n";
}

}  // namespace jch
