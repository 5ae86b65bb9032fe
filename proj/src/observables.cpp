#include "jch/observables.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "jch/error.hpp"

namespace jch {

double PopulationDistribution::total() const { return std::accumulate(population.begin(), population.end(), 0.0); }

PopulationDistribution populations(const WaveFunction& psi) {
  if (psi.amplitudes.size() % 2 != 0) throw ConfigError("populations: wavefunction dimension must be even");
  PopulationDistribution dist;
  dist.time = psi.time;
  dist.population.resize(psi.amplitudes.size() / 2);
  for (std::size_t r = 0; r < dist.population.size(); ++r)
    dist.population[r] = std::norm(psi.amplitudes[2 * r]) + std::norm(psi.amplitudes[2 * r + 1]);
  return dist;
}

double msd(const PopulationDistribution& dist, std::size_t r0) {
  if (r0 >= dist.population.size()) throw ConfigError("msd: reference site out of range");
  const double total = dist.total();
  if (std::abs(total - 1.0) > 1e-6)
    throw NumericalError("msd: total population " + std::to_string(total) + " deviates from 1");
  double sum = 0.0;
  for (std::size_t r = 0; r < dist.population.size(); ++r) {
    const double d = static_cast<double>(r) - static_cast<double>(r0);
    sum += dist.population[r] * d * d;
  }
  return sum;
}

ExponentSeries loglog_exponent(const MsdSeries& series, std::size_t smoothing_window) {
  const std::size_t n = series.times.size();
  if (series.values.size() != n) throw ConfigError("loglog_exponent: times and values differ in length");
  if (n < 3) throw ConfigError("loglog_exponent: need at least 3 points");
  if (smoothing_window == 0) throw ConfigError("loglog_exponent: smoothing window must be >= 1");

  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(series.times[i] > 0.0) || !(series.values[i] > 0.0))
      throw NumericalError("loglog_exponent: nonpositive time or msd at index " + std::to_string(i));
    x[i] = std::log(series.times[i]);
    y[i] = std::log(series.values[i]);
    if (i > 0 && !(x[i] > x[i - 1])) throw ConfigError("loglog_exponent: times must be strictly increasing");
  }

  std::vector<double> slope(n);
  slope[0] = (y[1] - y[0]) / (x[1] - x[0]);
  slope[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    slope[i] = (h1 * h1 * y[i + 1] - h2 * h2 * y[i - 1] + (h2 * h2 - h1 * h1) * y[i]) / (h1 * h2 * (h1 + h2));
  }

  ExponentSeries out;
  out.times = series.times;
  if (smoothing_window == 1) {
    out.values = std::move(slope);
    return out;
  }
  const std::size_t half = smoothing_window / 2;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += slope[k];
    out.values[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

double boundary_leak(const PopulationDistribution& dist, std::size_t margin) {
  const std::size_t n = dist.population.size();
  if (2 * margin >= n && margin > 0) throw ConfigError("boundary_leak: margin must be < num_sites / 2");
  double leak = 0.0;
  for (std::size_t r = 0; r < margin; ++r) leak += dist.population[r] + dist.population[n - 1 - r];
  return leak;
}

}  // namespace jch
