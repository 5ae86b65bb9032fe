#pragma once

#include <cstddef>
#include <vector>

#include "jch/propagator.hpp"

namespace jch {

/// Per-site population, photonic plus atomic.
struct PopulationDistribution {
  std::vector<double> population;
  double time = 0.0;

  double total() const;
};

struct MsdSeries {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> standard_error;  ///< empty for a single realisation
};

/// d log <x^2> / d log t on the recorded grid.
struct ExponentSeries {
  std::vector<double> times;
  std::vector<double> values;
};

PopulationDistribution populations(const WaveFunction& psi);

/// sum_r P(r) (r - r0)^2. Throws NumericalError if the total population is
/// more than 1e-6 away from one.
double msd(const PopulationDistribution& dist, std::size_t r0);

/// Central differences in log-log space (second order on non-uniform grids),
/// one-sided at the ends. `smoothing_window` > 1 applies a centred moving
/// average of that many points afterwards; 1 means no smoothing.
ExponentSeries loglog_exponent(const MsdSeries& series, std::size_t smoothing_window = 1);

/// Population held by the outermost `margin` sites at each edge.
double boundary_leak(const PopulationDistribution& dist, std::size_t margin);

}  // namespace jch
