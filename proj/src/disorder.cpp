#include "jch/disorder.hpp"

#include <cmath>
#include <random>
#include <string>

#include "jch/error.hpp"

namespace jch {
namespace {

enum class Stream : std::uint32_t { dynamic_detuning = 0x64796e61, static_coupling = 0x73746174 };

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t sample_index, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sample_index), static_cast<std::uint32_t>(sample_index >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

class TruncatedGaussian {
 public:
  TruncatedGaussian(double std, double bound) : gauss_(0.0, std), bound_(bound) {}

  double operator()(std::mt19937_64& rng) {
    double x = gauss_(rng);
    while (std::abs(x) > bound_) x = gauss_(rng);
    return x;
  }

 private:
  std::normal_distribution<double> gauss_;
  double bound_;
};

void check_truncation(double std, double bound, const char* what) {
  if (!(std >= 0.0) || !std::isfinite(std)) throw ConfigError(std::string(what) + ": strength_std must be >= 0");
  if (!(bound > 0.0) || !std::isfinite(bound)) throw ConfigError(std::string(what) + ": bound must be > 0");
  if (bound < std / 10.0)
    throw ConfigError(std::string(what) + ": bound " + std::to_string(bound) + " is below strength_std/10 (" +
                      std::to_string(std / 10.0) + "); truncation would dominate the distribution");
}

}  // namespace

void DynamicDisorderSpec::validate() const {
  check_truncation(strength_std, bound, "dynamic disorder");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("dynamic disorder: tau must be > 0");
}

void StaticDisorderSpec::validate() const { check_truncation(strength_std, bound, "static disorder"); }

DynamicDisorderTrajectory::DynamicDisorderTrajectory(double tau, std::size_t num_sites, std::size_t num_intervals,
                                                     std::vector<double> values)
    : tau_(tau), num_sites_(num_sites), num_intervals_(num_intervals), values_(std::move(values)) {
  if (values_.size() != num_sites_ * num_intervals_)
    throw ConfigError("disorder trajectory: value count does not match sites x intervals");
}

std::span<const double> DynamicDisorderTrajectory::interval_values(std::size_t interval) const {
  if (interval >= num_intervals_)
    throw ConfigError("disorder trajectory: interval " + std::to_string(interval) + " beyond horizon");
  return std::span<const double>(values_).subspan(interval * num_sites_, num_sites_);
}

double DynamicDisorderTrajectory::value(std::size_t site, std::size_t interval) const {
  if (site >= num_sites_) throw ConfigError("disorder trajectory: site out of range");
  return interval_values(interval)[site];
}

std::size_t DynamicDisorderTrajectory::interval_index(double time) const {
  if (!(time >= 0.0)) throw ConfigError("disorder trajectory: negative time");
  auto i = static_cast<std::size_t>(std::floor(time / tau_));
  while (switching_time(i + 1) <= time) ++i;
  while (i > 0 && switching_time(i) > time) --i;
  return i;
}

double DynamicDisorderTrajectory::value_at(std::size_t site, double time) const {
  return value(site, interval_index(time));
}

DynamicDisorderTrajectory sample_dynamic(const DynamicDisorderSpec& spec, std::size_t num_sites, double horizon,
                                         std::uint64_t sample_index) {
  spec.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("sample_dynamic: horizon must be > 0");
  if (num_sites < 1) throw ConfigError("sample_dynamic: num_sites must be >= 1");

  // ceil(horizon / tau), tolerant of representation error in the quotient
  auto intervals = static_cast<std::size_t>(std::ceil(horizon / spec.tau - 1e-9));
  if (intervals == 0) intervals = 1;
  while (static_cast<double>(intervals) * spec.tau < horizon) ++intervals;

  std::vector<double> values(intervals * num_sites, 0.0);
  if (spec.strength_std > 0.0) {
    auto rng = substream(spec.rng_seed, sample_index, Stream::dynamic_detuning);
    TruncatedGaussian draw(spec.strength_std, spec.bound);
    for (double& v : values) v = draw(rng);
  }
  return DynamicDisorderTrajectory(spec.tau, num_sites, intervals, std::move(values));
}

std::vector<double> sample_static(const StaticDisorderSpec& spec, std::size_t num_sites, std::uint64_t sample_index) {
  spec.validate();
  if (num_sites < 1) throw ConfigError("sample_static: num_sites must be >= 1");
  std::vector<double> offsets(num_sites, 0.0);
  if (spec.strength_std > 0.0) {
    auto rng = substream(spec.rng_seed, spec.resample_per_sample ? sample_index : 0, Stream::static_coupling);
    TruncatedGaussian draw(spec.strength_std, spec.bound);
    for (double& v : offsets) v = draw(rng);
  }
  return offsets;
}

std::vector<double> uniform_couplings(std::size_t num_sites, double coupling) {
  return std::vector<double>(num_sites, coupling);
}

std::vector<double> couplings_with_defects(double baseline, std::span<const double> offsets) {
  std::vector<double> couplings(offsets.size());
  for (std::size_t r = 0; r < offsets.size(); ++r) {
    couplings[r] = baseline + offsets[r];
    if (!(couplings[r] > 0.0))
      throw ConfigError("static disorder: coupling at site " + std::to_string(r) + " is " +
                        std::to_string(couplings[r]) + " (must be > 0)");
  }
  return couplings;
}

}  // namespace jch
