#pragma once

// Stochastic detuning gamma_r(t) and static coupling offsets eta_r.
//
// gamma_r(t) is piecewise constant on a global switching grid t_i = i * tau
// shared by all sites; each value is an independent truncated Gaussian. The
// static offsets eta_r are drawn the same way once per sample. Every draw
// comes from a substream keyed by (seed, sample_index, stream), so a sample
// is reproducible regardless of which worker produces it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace jch {

struct DynamicDisorderSpec {
  double strength_std = 1.0; ///< standard deviation of the untruncated Gaussian
  double bound = 2.0;        ///< |gamma| <= bound, enforced by rejection
  double tau = 1.0;          ///< correlation time; the DCF is 1 / tau
  std::uint64_t rng_seed = 1;

  double dcf() const noexcept { return 1.0 / tau; }
  void validate() const;
};

struct StaticDisorderSpec {
  double strength_std = 0.5;
  double bound = 1.0;
  std::uint64_t rng_seed = 1;
  /// When false every sample reuses the offsets of sample 0 (one fixed defect pattern).
  bool resample_per_sample = true;

  void validate() const;
};

class DynamicDisorderTrajectory {
 public:
  DynamicDisorderTrajectory(double tau, std::size_t num_sites, std::size_t num_intervals,
                            std::vector<double> values);

  double tau() const noexcept { return tau_; }
  std::size_t num_sites() const noexcept { return num_sites_; }
  std::size_t num_intervals() const noexcept { return num_intervals_; }
  /// End of the last interval, num_intervals * tau.
  double horizon() const noexcept { return static_cast<double>(num_intervals_) * tau_; }
  double switching_time(std::size_t interval) const noexcept { return static_cast<double>(interval) * tau_; }

  /// Detunings of all sites on [t_i, t_i + tau).
  std::span<const double> interval_values(std::size_t interval) const;
  double value(std::size_t site, std::size_t interval) const;
  /// gamma_r(t), using the interval containing t (right-open).
  double value_at(std::size_t site, double time) const;
  std::size_t interval_index(double time) const;

 private:
  double tau_;
  std::size_t num_sites_;
  std::size_t num_intervals_;
  std::vector<double> values_;  // interval-major
};

DynamicDisorderTrajectory sample_dynamic(const DynamicDisorderSpec& spec, std::size_t num_sites, double horizon,
                                         std::uint64_t sample_index);

/// Per-site coupling offsets eta_r; the caller forms beta_r = zeta + eta_r.
std::vector<double> sample_static(const StaticDisorderSpec& spec, std::size_t num_sites, std::uint64_t sample_index);

std::vector<double> uniform_couplings(std::size_t num_sites, double coupling);

/// beta_r = baseline + offsets[r]; throws ConfigError if any beta_r <= 0.
std::vector<double> couplings_with_defects(double baseline, std::span<const double> offsets);

}  // namespace jch
