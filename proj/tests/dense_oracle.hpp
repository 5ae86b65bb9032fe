#pragma once

// Brute-force reference for small chains: the dense Hamiltonian is written out
// from the model definition directly (not through HamiltonianMatrix) and the
// propagator is a full eigendecomposition.

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace oracle {

using Cplx = std::complex<double>;

inline Eigen::MatrixXd dense_hamiltonian(int sites, double kappa, double detuning, const std::vector<double>& beta,
                                         const std::vector<double>& gamma) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * sites, 2 * sites);
  for (int r = 0; r < sites; ++r) {
    const int photon = 2 * r;
    const int atom = 2 * r + 1;
    h(atom, atom) = detuning + gamma[r];
    h(photon, atom) = beta[r];
    h(atom, photon) = beta[r];
    if (r + 1 < sites) {
      h(photon, photon + 2) = -kappa;
      h(photon + 2, photon) = -kappa;
    }
  }
  return h;
}

/// exp(sign * i H t) psi via eigendecomposition; sign = -1 is the Schroedinger convention.
inline std::vector<Cplx> evolve(const Eigen::MatrixXd& h, const std::vector<Cplx>& psi, double t, int sign = -1) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const auto n = h.rows();
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = psi[static_cast<std::size_t>(i)];
  Eigen::VectorXcd c = es.eigenvectors().transpose().cast<Cplx>() * v;
  for (Eigen::Index l = 0; l < n; ++l) c(l) *= std::exp(Cplx(0.0, sign * es.eigenvalues()(l) * t));
  Eigen::VectorXcd out = es.eigenvectors().cast<Cplx>() * c;
  return std::vector<Cplx>(out.data(), out.data() + n);
}

inline std::vector<double> site_populations(const std::vector<Cplx>& psi) {
  std::vector<double> p(psi.size() / 2);
  for (std::size_t r = 0; r < p.size(); ++r) p[r] = std::norm(psi[2 * r]) + std::norm(psi[2 * r + 1]);
  return p;
}

inline double msd(const std::vector<double>& p, int r0) {
  double s = 0.0;
  for (std::size_t r = 0; r < p.size(); ++r) s += p[r] * (static_cast<double>(r) - r0) * (static_cast<double>(r) - r0);
  return s;
}

inline std::vector<Cplx> localized_initial(int sites, int r0) {
  std::vector<Cplx> psi(2 * sites, 0.0);
  psi[2 * r0] = psi[2 * r0 + 1] = 1.0 / std::sqrt(2.0);
  return psi;
}

}  // namespace oracle
