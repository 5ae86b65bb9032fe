#pragma once

// Single-excitation Jaynes-Cummings-Hubbard chain.
//
// Each site r carries a photonic state |g,1>_r and an atomic state |e,0>_r.
// The basis is interleaved: photonic r -> 2r, atomic r -> 2r + 1. In the frame
// rotating at the cavity frequency the Hamiltonian is
//
//   H = sum_r [ beta_r (|g1><e0| + h.c.)_r + (delta + gamma_r) |e0><e0|_r ]
//       - kappa sum_r (|g1>_r <g1|_{r+1} + h.c.)
//
// with open boundaries. All entries are real, so H is real symmetric.

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace jch {

using Amplitude = std::complex<double>;

struct LatticeConfig {
  std::size_t num_sites = 1;
  double kappa = 1.0;              ///< photon hopping, the energy unit
  double coupling_baseline = 10.0; ///< beta (uniform runs) or zeta (defect runs)
  double detuning_baseline = 0.0;  ///< alpha - omega; zero is resonance
  std::size_t initial_site = 0;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

enum class Mode { photonic = 0, atomic = 1 };

class SingleExcitationBasis {
 public:
  explicit SingleExcitationBasis(std::size_t num_sites);

  std::size_t num_sites() const noexcept { return num_sites_; }
  std::size_t dimension() const noexcept { return 2 * num_sites_; }

  std::size_t index(std::size_t site, Mode mode) const;
  std::pair<std::size_t, Mode> state(std::size_t index) const;

 private:
  std::size_t num_sites_;
};

SingleExcitationBasis build_basis(const LatticeConfig& config);

/// Real symmetric banded operator. Only the upper bands are stored:
/// first_band[i] = H(i, i+1), second_band[i] = H(i, i+2).
class HamiltonianMatrix {
 public:
  HamiltonianMatrix() = default;
  HamiltonianMatrix(std::vector<double> diagonal, std::vector<double> first_band,
                    std::vector<double> second_band);

  std::size_t dimension() const noexcept { return diagonal_.size(); }
  std::span<const double> diagonal() const noexcept { return diagonal_; }
  std::span<const double> first_band() const noexcept { return first_band_; }
  std::span<const double> second_band() const noexcept { return second_band_; }

  double entry(std::size_t row, std::size_t col) const;

  /// out = H * in. Sizes must equal dimension(); `out` must not alias `in`.
  void apply(std::span<const Amplitude> in, std::span<Amplitude> out) const;

  /// Gershgorin enclosure [lower, upper] of the spectrum.
  std::pair<double, double> spectral_bounds() const;

 private:
  std::vector<double> diagonal_;
  std::vector<double> first_band_;
  std::vector<double> second_band_;
};

/// Builds H for per-site couplings beta_r and instantaneous detunings gamma_r.
HamiltonianMatrix build_hamiltonian(const LatticeConfig& config, std::span<const double> couplings,
                                    std::span<const double> detunings);

std::vector<Amplitude> apply_hamiltonian(const HamiltonianMatrix& h, std::span<const Amplitude> psi);

}  // namespace jch
