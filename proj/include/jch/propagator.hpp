#pragma once

// Time evolution psi(t + dt) = exp(-i H dt) psi(t) for the piecewise-constant
// Hamiltonian. Within one correlation interval H is static and the action of
// the exponential is computed by a Lanczos (Krylov) or Chebyshev expansion;
// the dense eigendecomposition method exists for validation on small chains.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "jch/disorder.hpp"
#include "jch/lattice.hpp"

namespace jch {

struct WaveFunction {
  std::vector<Amplitude> amplitudes;
  double time = 0.0;

  double norm_squared() const;
};

enum class PropagationMethod { krylov, chebyshev, dense_oracle };

std::string_view to_string(PropagationMethod method);
PropagationMethod parse_propagation_method(std::string_view name);

struct PropagatorConfig {
  PropagationMethod method = PropagationMethod::krylov;
  std::size_t krylov_dim = 30;
  std::size_t chebyshev_order = 64;
  double substep = 2.0;           ///< max time covered by one exponential action
  double tolerance = 1e-12;       ///< local error target per substep
  double norm_drift_limit = 1e-9; ///< allowed |<psi|psi> - <psi0|psi0>|

  void validate() const;
};

/// Counters accumulated by a Propagator; useful for profiling and tests.
struct PropagatorStats {
  std::size_t substeps = 0;
  std::size_t matvecs = 0;
  std::size_t step_rejections = 0;
};

/// Stateful propagator owning the Krylov/Chebyshev workspaces, so repeated
/// short intervals do not reallocate.
class Propagator {
 public:
  explicit Propagator(PropagatorConfig config);

  /// Replaces `amplitudes` by exp(-i H duration) amplitudes.
  void advance(std::vector<Amplitude>& amplitudes, const HamiltonianMatrix& h, double duration);

  const PropagatorConfig& config() const noexcept { return config_; }
  const PropagatorStats& stats() const noexcept { return stats_; }

 private:
  void advance_krylov(std::vector<Amplitude>& psi, const HamiltonianMatrix& h, double duration);
  void advance_chebyshev(std::vector<Amplitude>& psi, const HamiltonianMatrix& h, double duration);
  void advance_dense(std::vector<Amplitude>& psi, const HamiltonianMatrix& h, double duration);

  PropagatorConfig config_;
  PropagatorStats stats_;
  std::vector<std::vector<Amplitude>> basis_;
  std::vector<Amplitude> work_;
  std::vector<Amplitude> scratch_;
  std::vector<double> bessel_;
};

/// (|g,1> + |e,0>) / sqrt(2) at the initial site, time 0.
WaveFunction initial_state(const LatticeConfig& config);

WaveFunction evolve_interval(const WaveFunction& psi, const HamiltonianMatrix& h, double duration,
                             const PropagatorConfig& config);

using SnapshotVisitor = std::function<void(const WaveFunction&)>;

/// Evolves through the switching grid of `trajectory`, rebuilding H at each
/// switching time, and calls `visit` exactly at every record time. Record
/// times must be sorted, not earlier than psi.time and within the trajectory
/// horizon.
void evolve_with_disorder(WaveFunction psi, const LatticeConfig& config, const DynamicDisorderTrajectory& trajectory,
                          std::span<const double> couplings, std::span<const double> record_times,
                          const PropagatorConfig& pconfig, const SnapshotVisitor& visit);

std::vector<WaveFunction> evolve_with_disorder(const WaveFunction& psi, const LatticeConfig& config,
                                               const DynamicDisorderTrajectory& trajectory,
                                               std::span<const double> couplings,
                                               std::span<const double> record_times,
                                               const PropagatorConfig& pconfig);

}  // namespace jch
