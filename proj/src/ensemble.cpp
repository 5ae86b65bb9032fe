#include "jch/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>

#include "jch/error.hpp"

namespace jch {

std::string_view to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::msd_trace: return "msd-trace";
    case ExperimentMode::snapshot: return "snapshot";
    case ExperimentMode::dcf_sweep: return "dcf-sweep";
  }
  return "unknown";
}

ExperimentMode parse_experiment_mode(std::string_view name) {
  if (name == "msd-trace") return ExperimentMode::msd_trace;
  if (name == "snapshot") return ExperimentMode::snapshot;
  if (name == "dcf-sweep") return ExperimentMode::dcf_sweep;
  throw ConfigError("unknown mode '" + std::string(name) + "' (expected msd-trace, snapshot or dcf-sweep)");
}

void ExperimentSpec::validate() const {
  lattice.validate();
  dynamic.validate();
  propagator.validate();
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be > 0");
  if (!(record.t_min > 0.0) || record.t_min >= horizon) throw ConfigError("record.t_min must lie in (0, horizon)");
  if (record.points_per_decade < 1) throw ConfigError("record.points_per_decade must be >= 1");
  if (static_disorder) {
    static_disorder->validate();
    if (lattice.coupling_baseline - static_disorder->bound <= 0.0)
      throw ConfigError("static disorder bound " + std::to_string(static_disorder->bound) +
                        " allows non-positive couplings (zeta = " + std::to_string(lattice.coupling_baseline) + ")");
  }
  if (boundary.margin > 0 && 2 * boundary.margin >= lattice.num_sites)
    throw ConfigError("boundary.margin must be < num_sites / 2");
  if (!(boundary.leak_threshold > 0.0)) throw ConfigError("boundary.leak_threshold must be > 0");
  if (mode == ExperimentMode::snapshot) {
    if (snapshot_times.empty()) throw ConfigError("snapshot mode needs at least one snapshot time");
    for (double t : snapshot_times)
      if (!(t > 0.0) || t > horizon) throw ConfigError("snapshot times must lie in (0, horizon]");
  }
  if (mode == ExperimentMode::dcf_sweep) {
    if (sweep.dcf_values.empty()) throw ConfigError("dcf-sweep needs at least one f_D value");
    for (double f : sweep.dcf_values)
      if (!(f > 0.0) || !std::isfinite(f)) throw ConfigError("dcf-sweep: all f_D values must be > 0");
    if (!(sweep.measure_time > 0.0) || sweep.measure_time > horizon)
      throw ConfigError("dcf-sweep: measure_time must lie in (0, horizon]");
  }
}

std::vector<double> default_dcf_grid() {
  std::vector<double> grid(13);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = std::pow(10.0, -1.0 + 3.0 * static_cast<double>(k) / 12.0);
  return grid;
}

StaticDisorderSpec default_static_disorder(double zeta, std::uint64_t seed) {
  StaticDisorderSpec s;
  s.bound = 0.1 * zeta;
  s.strength_std = 0.5 * s.bound;
  s.rng_seed = seed;
  return s;
}

std::vector<double> record_times(const ExperimentSpec& spec) {
  if (spec.mode == ExperimentMode::dcf_sweep) return {spec.sweep.measure_time};

  // (time, priority): exact grid points win over log-grid points when merged
  std::vector<std::pair<double, int>> points;
  points.emplace_back(0.0, 3);
  points.emplace_back(spec.horizon, 3);
  const double ppd = static_cast<double>(spec.record.points_per_decade);
  for (std::size_t k = 0;; ++k) {
    const double t = spec.record.t_min * std::pow(10.0, static_cast<double>(k) / ppd);
    if (t > spec.horizon) break;
    points.emplace_back(t, 0);
  }
  if (spec.record.overlay_switching_grid) {
    for (std::size_t i = 1;; ++i) {
      const double t = static_cast<double>(i) * spec.dynamic.tau;
      if (t > spec.horizon) break;
      points.emplace_back(t, 1);
    }
  }
  if (spec.mode == ExperimentMode::snapshot)
    for (double t : spec.snapshot_times) points.emplace_back(t, 2);

  std::sort(points.begin(), points.end());
  std::vector<double> times;
  std::vector<int> priority;
  for (const auto& [t, p] : points) {
    if (!times.empty() && t - times.back() <= 1e-6 * std::max(1e-3, t)) {
      if (p > priority.back()) {
        times.back() = t;
        priority.back() = p;
      }
      continue;
    }
    times.push_back(t);
    priority.push_back(p);
  }
  return times;
}

std::size_t auto_size_lattice(const ExperimentSpec& spec) {
  const double kappa = spec.lattice.kappa;
  const std::size_t margin = spec.boundary.margin;
  // The bare photon band velocity 2 kappa bounds every group velocity.
  const auto probe_half = static_cast<std::size_t>(std::ceil(2.0 * kappa * spec.horizon)) + margin + 40;

  LatticeConfig probe = spec.lattice;
  probe.num_sites = 2 * probe_half + 1;
  probe.initial_site = probe_half;

  const auto couplings = uniform_couplings(probe.num_sites, probe.coupling_baseline);
  const std::vector<double> zero(probe.num_sites, 0.0);
  const HamiltonianMatrix h = build_hamiltonian(probe, couplings, zero);

  WaveFunction psi = initial_state(probe);
  Propagator propagator(spec.propagator);
  std::vector<double> tail(probe_half + 2, 0.0);  // tail[d] = max_t P(|r - r0| >= d)
  for (int quarter = 1; quarter <= 4; ++quarter) {
    const double t = spec.horizon * quarter / 4.0;
    propagator.advance(psi.amplitudes, h, t - psi.time);
    psi.time = t;
    const auto dist = populations(psi);
    double acc = 0.0;
    for (std::size_t d = probe_half + 1; d-- > 0;) {
      acc += dist.population[probe_half + d];
      if (d > 0) acc += dist.population[probe_half - d];
      tail[d] = std::max(tail[d], acc);
    }
  }

  const double target = 1e-2 * spec.boundary.leak_threshold;
  std::size_t reach = probe_half;
  for (std::size_t d = 1; d <= probe_half; ++d) {
    if (tail[d] <= target) {
      reach = d;
      break;
    }
  }
  const auto half = static_cast<std::size_t>(std::ceil(1.1 * static_cast<double>(reach))) + margin + 1;
  return 2 * half;
}

SampleObservables run_sample(const ExperimentSpec& spec, std::uint64_t sample_index) {
  const LatticeConfig& lattice = spec.lattice;
  const std::vector<double> couplings =
      spec.static_disorder
          ? couplings_with_defects(lattice.coupling_baseline,
                                   sample_static(*spec.static_disorder, lattice.num_sites, sample_index))
          : uniform_couplings(lattice.num_sites, lattice.coupling_baseline);

  const std::vector<double> times = record_times(spec);
  const auto trajectory = sample_dynamic(spec.dynamic, lattice.num_sites, times.back(), sample_index);

  std::vector<double> snapshot_times;
  if (spec.mode == ExperimentMode::snapshot) {
    snapshot_times = spec.snapshot_times;
    std::sort(snapshot_times.begin(), snapshot_times.end());
  }

  SampleObservables out;
  out.times = times;
  out.msd.reserve(times.size());
  std::size_t next_snapshot = 0;
  evolve_with_disorder(initial_state(lattice), lattice, trajectory, couplings, times, spec.propagator,
                       [&](const WaveFunction& psi) {
                         PopulationDistribution dist = populations(psi);
                         if (spec.boundary.margin > 0) {
                           const double leak = boundary_leak(dist, spec.boundary.margin);
                           out.max_boundary_leak = std::max(out.max_boundary_leak, leak);
                           if (leak > spec.boundary.leak_threshold) {
                             std::ostringstream msg;
                             msg << "boundary leak " << leak << " at t=" << psi.time << " exceeds threshold "
                                 << spec.boundary.leak_threshold << "; the lattice is too small for this horizon";
                             throw NumericalError(msg.str());
                           }
                         }
                         out.msd.push_back(msd(dist, lattice.initial_site));
                         while (next_snapshot < snapshot_times.size() &&
                                std::abs(psi.time - snapshot_times[next_snapshot]) <=
                                    1e-6 * std::max(1e-3, snapshot_times[next_snapshot])) {
                           out.snapshots.push_back(dist);
                           ++next_snapshot;
                         }
                       });

  MsdSeries positive;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > 0.0) {
      positive.times.push_back(times[i]);
      positive.values.push_back(out.msd[i]);
    }
  }
  const bool all_positive =
      std::all_of(positive.values.begin(), positive.values.end(), [](double v) { return v > 0.0; });
  if (positive.times.size() >= 3 && all_positive) {
    ExponentSeries e = loglog_exponent(positive);
    out.exponent_times = std::move(e.times);
    out.exponent = std::move(e.values);
  }
  return out;
}

namespace {

// Mean and standard error of column `i` of the per-sample rows, in index order.
template <typename Get>
std::pair<double, double> mean_and_error(std::size_t count, Get get) {
  // Welford updates: identical samples give exactly zero spread
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < count; ++s) {
    const double x = get(s);
    const double d = x - mean;
    mean += d / static_cast<double>(s + 1);
    m2 += d * (x - mean);
  }
  if (count < 2) return {mean, 0.0};
  const double var = m2 / static_cast<double>(count - 1);
  return {mean, std::sqrt(var / static_cast<double>(count))};
}

}  // namespace

EnsembleResult reduce_samples(std::span<const SampleObservables> samples) {
  if (samples.empty()) throw ConfigError("reduce_samples: no samples");
  const auto& first = samples.front();
  for (const auto& s : samples) {
    if (s.times != first.times || s.exponent_times.size() != first.exponent_times.size() ||
        s.snapshots.size() != first.snapshots.size())
      throw NumericalError("reduce_samples: samples recorded on different grids");
  }

  const std::size_t count = samples.size();
  EnsembleResult out;
  out.samples = count;
  out.msd.times = first.times;
  for (std::size_t i = 0; i < first.times.size(); ++i) {
    const auto [m, e] = mean_and_error(count, [&](std::size_t s) { return samples[s].msd[i]; });
    out.msd.values.push_back(m);
    out.msd.standard_error.push_back(e);
  }
  out.exponent.times = first.exponent_times;
  for (std::size_t i = 0; i < first.exponent_times.size(); ++i) {
    const auto [m, e] = mean_and_error(count, [&](std::size_t s) { return samples[s].exponent[i]; });
    out.exponent.values.push_back(m);
    out.exponent_standard_error.push_back(e);
  }
  for (std::size_t k = 0; k < first.snapshots.size(); ++k) {
    PopulationDistribution mean;
    mean.time = first.snapshots[k].time;
    mean.population.assign(first.snapshots[k].population.size(), 0.0);
    for (const auto& s : samples)
      for (std::size_t r = 0; r < mean.population.size(); ++r) mean.population[r] += s.snapshots[k].population[r];
    for (double& p : mean.population) p /= static_cast<double>(count);
    out.snapshots.push_back(std::move(mean));
  }
  for (const auto& s : samples) out.max_boundary_leak = std::max(out.max_boundary_leak, s.max_boundary_leak);
  return out;
}

EnsembleResult run_ensemble(const ExperimentSpec& spec, std::size_t workers, const ProgressFn& progress) {
  spec.validate();
  if (workers < 1) throw ConfigError("workers must be >= 1");
  const std::size_t count = spec.samples;
  workers = std::min(workers, count);

  std::vector<SampleObservables> results(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> completed{0};
  // lowest failing index so far; samples above it are skipped, samples below
  // it still run, so the reported failure does not depend on scheduling
  std::atomic<std::size_t> first_failure{count};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t index = next.fetch_add(1);
      if (index >= count || index > first_failure.load()) return;
      try {
        results[index] = run_sample(spec, index);
      } catch (...) {
        failures[index] = std::current_exception();
        std::size_t seen = first_failure.load();
        while (index < seen && !first_failure.compare_exchange_weak(seen, index)) {
        }
        return;
      }
      const std::size_t done = completed.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(done, count);
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t index = 0; index < count; ++index) {
    if (!failures[index]) continue;
    const std::string prefix = "sample " + std::to_string(index) + ": ";
    try {
      std::rethrow_exception(failures[index]);
    } catch (const Error& e) {
      throw_error(e.kind(), prefix + e.what());
    } catch (const std::exception& e) {
      throw NumericalError(prefix + e.what());
    }
  }
  return reduce_samples(results);
}

SweepResult sweep_dcf(const ExperimentSpec& spec, std::size_t workers, const ProgressFn& progress) {
  if (spec.mode != ExperimentMode::dcf_sweep) throw ConfigError("sweep_dcf requires mode dcf-sweep");
  spec.validate();

  auto measure = [&](const ExperimentSpec& s) {
    const EnsembleResult r = run_ensemble(s, workers, progress);
    return std::pair{r.msd.values.back(), r.msd.standard_error.back()};
  };

  SweepResult out;
  for (double f : spec.sweep.dcf_values) {
    ExperimentSpec point = spec;
    point.dynamic.tau = 1.0 / f;
    const auto [m, e] = measure(point);
    out.points.push_back({f, m, e});
  }

  ExperimentSpec frozen = spec;
  frozen.dynamic.strength_std = 0.0;
  frozen.dynamic.tau = spec.horizon;

  ExperimentSpec dispersive = frozen;
  dispersive.static_disorder.reset();
  const auto [md, ed] = measure(dispersive);
  out.reference_dispersive = {0.0, md, ed};

  ExperimentSpec localized = frozen;
  if (!localized.static_disorder)
    localized.static_disorder = default_static_disorder(spec.lattice.coupling_baseline, spec.dynamic.rng_seed);
  const auto [ml, el] = measure(localized);
  out.reference_localized = {0.0, ml, el};
  return out;
}

}  // namespace jch
