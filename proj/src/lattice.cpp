#include "jch/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jch/error.hpp"

namespace jch {

void LatticeConfig::validate() const {
  if (num_sites < 1) throw ConfigError("lattice: num_sites must be >= 1");
  if (initial_site >= num_sites)
    throw ConfigError("lattice: initial_site " + std::to_string(initial_site) +
                      " outside [0, " + std::to_string(num_sites) + ")");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("lattice: kappa must be > 0");
  if (!(coupling_baseline > 0.0) || !std::isfinite(coupling_baseline))
    throw ConfigError("lattice: coupling must be > 0");
  if (!std::isfinite(detuning_baseline)) throw ConfigError("lattice: detuning must be finite");
}

SingleExcitationBasis::SingleExcitationBasis(std::size_t num_sites) : num_sites_(num_sites) {
  if (num_sites == 0) throw ConfigError("basis: num_sites must be >= 1");
}

std::size_t SingleExcitationBasis::index(std::size_t site, Mode mode) const {
  if (site >= num_sites_) throw ConfigError("basis: site " + std::to_string(site) + " out of range");
  return 2 * site + static_cast<std::size_t>(mode);
}

std::pair<std::size_t, Mode> SingleExcitationBasis::state(std::size_t index) const {
  if (index >= dimension()) throw ConfigError("basis: index " + std::to_string(index) + " out of range");
  return {index / 2, (index % 2 == 0) ? Mode::photonic : Mode::atomic};
}

SingleExcitationBasis build_basis(const LatticeConfig& config) {
  return SingleExcitationBasis(config.num_sites);
}

HamiltonianMatrix::HamiltonianMatrix(std::vector<double> diagonal, std::vector<double> first_band,
                                     std::vector<double> second_band)
    : diagonal_(std::move(diagonal)), first_band_(std::move(first_band)), second_band_(std::move(second_band)) {
  const std::size_t n = diagonal_.size();
  if (first_band_.size() != (n > 0 ? n - 1 : 0) || second_band_.size() != (n > 1 ? n - 2 : 0))
    throw ConfigError("hamiltonian: band lengths inconsistent with dimension");
}

double HamiltonianMatrix::entry(std::size_t row, std::size_t col) const {
  const std::size_t n = dimension();
  if (row >= n || col >= n) throw ConfigError("hamiltonian: entry index out of range");
  const std::size_t lo = std::min(row, col);
  switch (std::max(row, col) - lo) {
    case 0: return diagonal_[lo];
    case 1: return first_band_[lo];
    case 2: return second_band_[lo];
    default: return 0.0;
  }
}

void HamiltonianMatrix::apply(std::span<const Amplitude> in, std::span<Amplitude> out) const {
  const std::size_t n = dimension();
  if (in.size() != n || out.size() != n)
    throw ConfigError("apply_hamiltonian: vector of size " + std::to_string(in.size()) +
                      " does not match dimension " + std::to_string(n));
  const double* d = diagonal_.data();
  const double* b1 = first_band_.data();
  const double* b2 = second_band_.data();
  auto row = [&](std::size_t i) {
    Amplitude acc = d[i] * in[i];
    if (i + 1 < n) acc += b1[i] * in[i + 1];
    if (i + 2 < n) acc += b2[i] * in[i + 2];
    if (i >= 1) acc += b1[i - 1] * in[i - 1];
    if (i >= 2) acc += b2[i - 2] * in[i - 2];
    out[i] = acc;
  };
  if (n < 5) {
    for (std::size_t i = 0; i < n; ++i) row(i);
    return;
  }
  row(0);
  row(1);
  // interior rows in real arithmetic, no bounds checks
  const double* x = reinterpret_cast<const double*>(in.data());
  double* y = reinterpret_cast<double*>(out.data());
  for (std::size_t i = 2; i + 2 < n; ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      y[2 * i + c] = d[i] * x[2 * i + c] + b1[i] * x[2 * i + 2 + c] + b2[i] * x[2 * i + 4 + c] +
                     b1[i - 1] * x[2 * i - 2 + c] + b2[i - 2] * x[2 * i - 4 + c];
    }
  }
  row(n - 2);
  row(n - 1);
}

std::pair<double, double> HamiltonianMatrix::spectral_bounds() const {
  const std::size_t n = dimension();
  double lower = 0.0;
  double upper = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i + 1 < n) radius += std::abs(first_band_[i]);
    if (i + 2 < n) radius += std::abs(second_band_[i]);
    if (i >= 1) radius += std::abs(first_band_[i - 1]);
    if (i >= 2) radius += std::abs(second_band_[i - 2]);
    const double lo = diagonal_[i] - radius;
    const double hi = diagonal_[i] + radius;
    if (i == 0 || lo < lower) lower = lo;
    if (i == 0 || hi > upper) upper = hi;
  }
  return {lower, upper};
}

HamiltonianMatrix build_hamiltonian(const LatticeConfig& config, std::span<const double> couplings,
                                    std::span<const double> detunings) {
  const std::size_t sites = config.num_sites;
  if (couplings.size() != sites || detunings.size() != sites)
    throw ConfigError("build_hamiltonian: expected " + std::to_string(sites) + " couplings and detunings, got " +
                      std::to_string(couplings.size()) + " and " + std::to_string(detunings.size()));
  for (std::size_t r = 0; r < sites; ++r) {
    if (!(couplings[r] > 0.0))
      throw ConfigError("build_hamiltonian: coupling at site " + std::to_string(r) + " is not positive");
  }

  const std::size_t n = 2 * sites;
  std::vector<double> diagonal(n, 0.0);
  std::vector<double> first(n - 1, 0.0);
  std::vector<double> second(n >= 2 ? n - 2 : 0, 0.0);
  for (std::size_t r = 0; r < sites; ++r) {
    diagonal[2 * r + 1] = config.detuning_baseline + detunings[r];
    first[2 * r] = couplings[r];
    if (r + 1 < sites) second[2 * r] = -config.kappa;
  }
  return HamiltonianMatrix(std::move(diagonal), std::move(first), std::move(second));
}

std::vector<Amplitude> apply_hamiltonian(const HamiltonianMatrix& h, std::span<const Amplitude> psi) {
  std::vector<Amplitude> out(h.dimension());
  h.apply(psi, out);
  return out;
}

}  // namespace jch
