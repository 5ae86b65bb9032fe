#pragma once

// Ensembles of stochastic realisations and the three experiment shapes:
// MSD time traces, population snapshots and MSD-versus-DCF sweeps.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "jch/disorder.hpp"
#include "jch/lattice.hpp"
#include "jch/observables.hpp"
#include "jch/propagator.hpp"

namespace jch {

enum class ExperimentMode { msd_trace, snapshot, dcf_sweep };

std::string_view to_string(ExperimentMode mode);
ExperimentMode parse_experiment_mode(std::string_view name);

/// Log-uniform recording grid, optionally overlaid with the switching grid.
struct RecordGrid {
  double t_min = 0.1;
  std::size_t points_per_decade = 64;
  bool overlay_switching_grid = true;
};

struct SweepSpec {
  std::vector<double> dcf_values;  ///< f_D in units of kappa
  double measure_time = 100.0;     ///< T at which MSD is read off
};

struct BoundaryMonitor {
  std::size_t margin = 10;      ///< edge sites watched on each side; 0 disables the check
  double leak_threshold = 1e-8;
};

struct ExperimentSpec {
  ExperimentMode mode = ExperimentMode::msd_trace;
  LatticeConfig lattice;
  DynamicDisorderSpec dynamic;
  std::optional<StaticDisorderSpec> static_disorder;
  std::size_t samples = 500;
  double horizon = 100.0;
  RecordGrid record;
  std::vector<double> snapshot_times{10.0, 100.0};
  SweepSpec sweep;
  PropagatorConfig propagator;
  BoundaryMonitor boundary;

  void validate() const;
};

/// Default DCF grid: 13 log-spaced values of f_D / kappa in [0.1, 100].
std::vector<double> default_dcf_grid();

/// Sorted record times for the experiment mode; t = 0 is included for traces and snapshots.
std::vector<double> record_times(const ExperimentSpec& spec);

/// Smallest even chain, centred on the initial site, whose outer `margin`
/// sites stay below the leak threshold for disorder-free ballistic spreading
/// up to the horizon. Returns the number of sites; the initial site is N / 2.
std::size_t auto_size_lattice(const ExperimentSpec& spec);

struct SampleObservables {
  std::vector<double> times;
  std::vector<double> msd;
  std::vector<double> exponent_times;  ///< t > 0 record times, when at least 3 exist
  std::vector<double> exponent;
  std::vector<PopulationDistribution> snapshots;
  double max_boundary_leak = 0.0;
};

SampleObservables run_sample(const ExperimentSpec& spec, std::uint64_t sample_index);

struct EnsembleResult {
  std::size_t samples = 0;
  MsdSeries msd;                    ///< sample mean of per-sample MSD, with standard errors
  ExponentSeries exponent;          ///< sample mean of per-sample log-log exponents
  std::vector<double> exponent_standard_error;
  std::vector<PopulationDistribution> snapshots;  ///< sample-averaged populations
  double max_boundary_leak = 0.0;
};

/// Ordered reduction over samples (index order). Standard errors use the
/// unbiased sample variance; they are zero for a single sample.
EnsembleResult reduce_samples(std::span<const SampleObservables> samples);

using ProgressFn = std::function<void(std::size_t completed, std::size_t total)>;

/// Runs spec.samples realisations on `workers` threads. The result does not
/// depend on the worker count. The first failing sample index aborts the run.
EnsembleResult run_ensemble(const ExperimentSpec& spec, std::size_t workers, const ProgressFn& progress = {});

struct SweepPoint {
  double dcf = 0.0;
  double msd = 0.0;
  double standard_error = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  SweepPoint reference_dispersive;  ///< no dynamic disorder, uniform coupling (dcf unused)
  SweepPoint reference_localized;   ///< no dynamic disorder, static coupling disorder (dcf unused)
};

SweepResult sweep_dcf(const ExperimentSpec& spec, std::size_t workers, const ProgressFn& progress = {});

/// Static disorder used for the localized reference when the experiment has none:
/// bound 0.1 zeta, strength bound / 2.
StaticDisorderSpec default_static_disorder(double zeta, std::uint64_t seed);

}  // namespace jch
