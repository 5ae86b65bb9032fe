#include <doctest.h>

#include <random>
#include <set>

#include "dense_oracle.hpp"
#include "jch/error.hpp"
#include "jch/lattice.hpp"

using namespace jch;

namespace {

LatticeConfig chain(std::size_t n, double beta = 10.0) {
  LatticeConfig c;
  c.num_sites = n;
  c.coupling_baseline = beta;
  c.initial_site = n / 2;
  return c;
}

Eigen::MatrixXd to_dense(const HamiltonianMatrix& h) {
  const auto n = static_cast<Eigen::Index>(h.dimension());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = h.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return m;
}

}  // namespace

TEST_CASE("basis ordering interleaves photonic and atomic states") {
  const auto one = build_basis(chain(1));
  CHECK(one.dimension() == 2);
  CHECK(one.index(0, Mode::photonic) == 0);
  CHECK(one.index(0, Mode::atomic) == 1);

  const auto three = build_basis(chain(3));
  CHECK(three.dimension() == 6);
  CHECK(three.index(2, Mode::atomic) == 5);

  for (std::size_t n : {1u, 2u, 7u, 40u}) {
    const SingleExcitationBasis basis(n);
    std::set<std::size_t> seen;
    for (std::size_t r = 0; r < n; ++r) {
      for (Mode m : {Mode::photonic, Mode::atomic}) {
        const std::size_t i = basis.index(r, m);
        CHECK(basis.state(i) == std::pair{r, m});
        seen.insert(i);
      }
    }
    CHECK(seen.size() == 2 * n);
    CHECK(*seen.rbegin() == 2 * n - 1);
  }
  CHECK_THROWS_AS(three.index(3, Mode::photonic), ConfigError);
}

TEST_CASE("lattice config invariants") {
  LatticeConfig c = chain(4);
  CHECK_NOTHROW(c.validate());
  c.initial_site = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = chain(4);
  c.kappa = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = chain(4);
  c.coupling_baseline = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("single resonant cavity splits by plus/minus beta") {
  const auto h = build_hamiltonian(chain(1), std::vector{10.0}, std::vector{0.0});
  const Eigen::MatrixXd m = to_dense(h);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(0, 1) == 10.0);
  CHECK(m(1, 0) == 10.0);
  CHECK(m(1, 1) == 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-10.0).epsilon(1e-14));
  CHECK(es.eigenvalues()(1) == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("two-site chain matches the dense oracle entrywise and spectrally") {
  const std::vector<double> beta{10.0, 10.0}, gamma{0.0, 0.0};
  const auto h = build_hamiltonian(chain(2), beta, gamma);
  const Eigen::MatrixXd m = to_dense(h);
  CHECK(m(0, 2) == -1.0);
  CHECK(m(0, 1) == 10.0);
  CHECK(m(2, 3) == 10.0);
  CHECK(m(1, 3) == 0.0);
  const Eigen::MatrixXd ref = oracle::dense_hamiltonian(2, 1.0, 0.0, beta, gamma);
  CHECK((m - ref).norm() == 0.0);

  // Symmetric/antisymmetric photon modes at -/+kappa each hybridise with one atomic
  // combination: eigenvalues (-/+kappa +/- sqrt(kappa^2 + 4 beta^2)) / 2.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref);
  const Eigen::VectorXd expected = (Eigen::VectorXd(4) << -10.5124921972503929, -9.5124921972503929,
                                    9.5124921972503929, 10.5124921972503929)
                                       .finished();
  const Eigen::VectorXd got = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
  CHECK((got - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hamiltonian is real symmetric with bandwidth at most 3 for random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coupling(0.5, 15.0), detuning(-3.0, 3.0);
  std::uniform_int_distribution<std::size_t> size(1, 40);
  for (int trial = 0; trial < 50; ++trial) {
    LatticeConfig c = chain(size(rng));
    c.detuning_baseline = detuning(rng);
    c.kappa = coupling(rng) / 5.0;
    std::vector<double> beta(c.num_sites), gamma(c.num_sites);
    for (auto& b : beta) b = coupling(rng);
    for (auto& g : gamma) g = detuning(rng);
    const auto h = build_hamiltonian(c, beta, gamma);
    const Eigen::MatrixXd m = to_dense(h);
    CHECK(m == m.transpose());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (std::abs(i - j) > 3) CHECK(m(i, j) == 0.0);
    const Eigen::MatrixXd ref =
        oracle::dense_hamiltonian(static_cast<int>(c.num_sites), c.kappa, c.detuning_baseline, beta, gamma);
    CHECK((m - ref).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("uniform resonant chain spectrum lies within beta + 2 kappa") {
  const std::size_t n = 32;
  const auto h = build_hamiltonian(chain(n), std::vector<double>(n, 10.0), std::vector<double>(n, 0.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(h));
  CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= 12.0);
  // Two polariton branches of equal size around +beta and -beta.
  CHECK((es.eigenvalues().array() > 0).count() == static_cast<Eigen::Index>(n));
  const auto [lo, hi] = h.spectral_bounds();
  CHECK(lo <= es.eigenvalues().minCoeff());
  CHECK(hi >= es.eigenvalues().maxCoeff());
}

TEST_CASE("apply_hamiltonian") {
  const auto h1 = build_hamiltonian(chain(1), std::vector{10.0}, std::vector{0.0});
  const auto y = apply_hamiltonian(h1, std::vector<Amplitude>{1.0, 0.0});
  CHECK(y[0] == Amplitude(0.0, 0.0));
  CHECK(y[1] == Amplitude(10.0, 0.0));

  const auto zero = apply_hamiltonian(h1, std::vector<Amplitude>(2, 0.0));
  CHECK(zero[0] == Amplitude(0.0));
  CHECK(zero[1] == Amplitude(0.0));

  CHECK_THROWS_AS(apply_hamiltonian(h1, std::vector<Amplitude>(3)), ConfigError);

  SUBCASE("eigenvectors of small chains") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n = 1; n <= 8; ++n) {
      std::vector<double> beta(n), gamma(n);
      for (auto& b : beta) b = 10.0 + u(rng);
      for (auto& g : gamma) g = 2.0 * u(rng);
      const auto h = build_hamiltonian(chain(n), beta, gamma);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          oracle::dense_hamiltonian(static_cast<int>(n), 1.0, 0.0, beta, gamma));
      for (Eigen::Index l = 0; l < es.eigenvalues().size(); ++l) {
        std::vector<Amplitude> v(2 * n);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = es.eigenvectors()(static_cast<Eigen::Index>(i), l);
        const auto hv = apply_hamiltonian(h, v);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(hv[i] - es.eigenvalues()(l) * v[i]) < 1e-12);
      }
    }
  }

  SUBCASE("agrees with dense matvec up to N = 64") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {1u, 2u, 3u, 17u, 64u}) {
      std::vector<double> beta(n), gamma(n);
      for (auto& b : beta) b = 10.0 + u(rng);
      for (auto& g : gamma) g = u(rng);
      const auto h = build_hamiltonian(chain(n), beta, gamma);
      const Eigen::MatrixXd m = oracle::dense_hamiltonian(static_cast<int>(n), 1.0, 0.0, beta, gamma);
      Eigen::VectorXcd x(2 * n);
      std::vector<Amplitude> xs(2 * n);
      for (std::size_t i = 0; i < 2 * n; ++i) xs[i] = x(static_cast<Eigen::Index>(i)) = Amplitude(u(rng), u(rng));
      const Eigen::VectorXcd ref = m.cast<Amplitude>() * x;
      const auto got = apply_hamiltonian(h, xs);
      for (std::size_t i = 0; i < 2 * n; ++i) CHECK(std::abs(got[i] - ref(static_cast<Eigen::Index>(i))) < 1e-12);
    }
  }
}

TEST_CASE("build_hamiltonian rejects inconsistent inputs") {
  CHECK_THROWS_AS(build_hamiltonian(chain(3), std::vector<double>(2, 10.0), std::vector<double>(3, 0.0)),
                  ConfigError);
  CHECK_THROWS_AS(build_hamiltonian(chain(3), std::vector<double>(3, 10.0), std::vector<double>(4, 0.0)),
                  ConfigError);
  CHECK_THROWS_AS(build_hamiltonian(chain(2), std::vector<double>{10.0, 0.0}, std::vector<double>(2, 0.0)),
                  ConfigError);
}
