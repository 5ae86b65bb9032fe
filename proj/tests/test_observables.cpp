#include <doctest.h>

#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "jch/ensemble.hpp"
#include "jch/error.hpp"
#include "jch/observables.hpp"

using namespace jch;

namespace {

PopulationDistribution point_at(std::size_t n, std::size_t site) {
  PopulationDistribution d;
  d.population.assign(n, 0.0);
  d.population[site] = 1.0;
  return d;
}

MsdSeries power_law(double c, double a) {
  MsdSeries s;
  for (int k = 0; k <= 128; ++k) {
    const double t = 0.1 * std::pow(10.0, k / 64.0);
    s.times.push_back(t);
    s.values.push_back(c * std::pow(t, a));
  }
  return s;
}

LatticeConfig chain(std::size_t n, std::size_t r0) {
  LatticeConfig c;
  c.num_sites = n;
  c.initial_site = r0;
  return c;
}

}  // namespace

TEST_CASE("populations sum both modes") {
  WaveFunction psi;
  psi.amplitudes = {Amplitude(0.6, 0.0), Amplitude(0.0, 0.0), Amplitude(0.0, 0.48), Amplitude(0.64, 0.0)};
  psi.time = 3.5;
  const auto d = populations(psi);
  REQUIRE(d.population.size() == 2);
  CHECK(d.population[0] == doctest::Approx(0.36));
  CHECK(d.population[1] == doctest::Approx(0.48 * 0.48 + 0.64 * 0.64));
  CHECK(d.total() == doctest::Approx(psi.norm_squared()));
  CHECK(d.time == 3.5);
}

TEST_CASE("initial state is a point distribution") {
  const auto d = populations(initial_state(chain(9, 4)));
  for (std::size_t r = 0; r < 9; ++r) CHECK(d.population[r] == (r == 4 ? doctest::Approx(1.0) : doctest::Approx(0.0)));
  CHECK(msd(d, 4) == 0.0);
}

TEST_CASE("msd of simple distributions") {
  PopulationDistribution d;
  d.population = {0.0, 0.5, 0.0, 0.5, 0.0};
  CHECK(msd(d, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(msd(point_at(7, 0), 3) == doctest::Approx(9.0));

  d.population = {0.25, 0.25, 0.25, 0.25};
  // (0-1)^2 + 0 + 1 + 4, each weighted by a quarter
  CHECK(msd(d, 1) == doctest::Approx(1.5));
}

TEST_CASE("msd rejects an unnormalised distribution") {
  PopulationDistribution d;
  d.population = {0.5, 0.49};
  CHECK_THROWS_AS(msd(d, 0), NumericalError);
  d.population = {0.5, 0.5 - 1e-8};
  CHECK_NOTHROW(msd(d, 0));
}

TEST_CASE("msd is invariant under mirroring") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PopulationDistribution d;
  d.population.resize(23);
  double sum = 0.0;
  for (auto& p : d.population) sum += (p = u(rng));
  for (auto& p : d.population) p /= sum;
  PopulationDistribution mirrored;
  mirrored.population.assign(d.population.rbegin(), d.population.rend());
  for (std::size_t r0 : {0u, 5u, 11u, 22u}) CHECK(msd(d, r0) == doctest::Approx(msd(mirrored, 22 - r0)).epsilon(1e-13));
}

TEST_CASE("msd from populations matches msd from amplitudes") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  WaveFunction psi;
  psi.amplitudes.resize(40);
  for (auto& a : psi.amplitudes) a = Amplitude(g(rng), g(rng));
  const double norm = std::sqrt(psi.norm_squared());
  for (auto& a : psi.amplitudes) a /= norm;

  double direct = 0.0;
  for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
    const double x = static_cast<double>(i / 2) - 8.0;
    direct += std::norm(psi.amplitudes[i]) * x * x;
  }
  CHECK(std::abs(msd(populations(psi), 8) - direct) < 1e-12);
}

TEST_CASE("exponent of exact power laws") {
  for (double a : {0.0, 1.0, 2.0, 0.5}) {
    const auto e = loglog_exponent(power_law(3.0, a));
    REQUIRE(e.values.size() == 129);
    for (double v : e.values) CHECK(std::abs(v - a) < 1e-6);
  }
}

TEST_CASE("exponent on a non-uniform grid") {
  MsdSeries s;
  for (double t : {0.5, 0.7, 1.9, 2.0, 5.0, 11.0, 12.5}) {
    s.times.push_back(t);
    s.values.push_back(0.2 * t * t);
  }
  for (double v : loglog_exponent(s).values) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("exponent smoothing") {
  auto s = power_law(1.0, 1.0);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] *= (i % 2 == 0 ? 1.01 : 1.0);
  const auto raw = loglog_exponent(s);
  const auto smooth = loglog_exponent(s, 5);
  REQUIRE(smooth.values.size() == raw.values.size());
  double raw_spread = 0.0;
  double smooth_spread = 0.0;
  for (std::size_t i = 10; i + 10 < raw.values.size(); ++i) {
    raw_spread = std::max(raw_spread, std::abs(raw.values[i] - 1.0));
    smooth_spread = std::max(smooth_spread, std::abs(smooth.values[i] - 1.0));
  }
  CHECK(smooth_spread < raw_spread);
  CHECK(loglog_exponent(power_law(2.0, 2.0), 7).values[64] == doctest::Approx(2.0));
}

TEST_CASE("exponent input errors") {
  MsdSeries s;
  s.times = {1.0, 2.0};
  s.values = {1.0, 4.0};
  CHECK_THROWS_AS(loglog_exponent(s), ConfigError);
  s.times = {1.0, 2.0, 3.0};
  s.values = {1.0, 0.0, 9.0};
  CHECK_THROWS_AS(loglog_exponent(s), NumericalError);
  s.values = {1.0, -4.0, 9.0};
  CHECK_THROWS_AS(loglog_exponent(s), NumericalError);
  s.values = {1.0, 4.0, 9.0};
  s.times = {1.0, 1.0, 3.0};
  CHECK_THROWS_AS(loglog_exponent(s), ConfigError);
  s.times = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(loglog_exponent(s, 0), ConfigError);
}

TEST_CASE("boundary leak") {
  CHECK(boundary_leak(point_at(20, 10), 5) == 0.0);
  CHECK(boundary_leak(point_at(20, 0), 5) == 1.0);
  CHECK(boundary_leak(point_at(20, 19), 1) == 1.0);
  CHECK(boundary_leak(point_at(20, 1), 1) == 0.0);
  CHECK(boundary_leak(point_at(20, 0), 0) == 0.0);

  PopulationDistribution d;
  d.population = {0.1, 0.2, 0.4, 0.2, 0.1};
  CHECK(boundary_leak(d, 2) == doctest::Approx(0.6));
  CHECK_THROWS_AS(boundary_leak(d, 3), ConfigError);
}

TEST_CASE("populations match the dense oracle on a disordered chain") {
  const std::size_t n = 32;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> beta(n), gamma(n);
  for (auto& b : beta) b = 10.0 + u(rng);
  for (auto& g : gamma) g = 2.0 * u(rng);

  const auto cfg = chain(n, 16);
  const auto h = build_hamiltonian(cfg, beta, gamma);
  const auto psi = evolve_interval(initial_state(cfg), h, 5.0, PropagatorConfig{});
  const auto got = populations(psi);

  const auto want = oracle::site_populations(
      oracle::evolve(oracle::dense_hamiltonian(32, 1.0, 0.0, beta, gamma), oracle::localized_initial(32, 16), 5.0));
  for (std::size_t r = 0; r < n; ++r) CHECK(std::abs(got.population[r] - want[r]) < 1e-10);
}

TEST_CASE("uniform chain msd matches the dense oracle") {
  const std::size_t n = 64;
  const auto cfg = chain(n, 32);
  const std::vector<double> beta(n, 10.0), gamma(n, 0.0);
  const auto psi = evolve_interval(initial_state(cfg), build_hamiltonian(cfg, beta, gamma), 10.0, PropagatorConfig{});
  const double want = oracle::msd(
      oracle::site_populations(
          oracle::evolve(oracle::dense_hamiltonian(64, 1.0, 0.0, beta, gamma), oracle::localized_initial(64, 32), 10.0)),
      32);
  CHECK(msd(populations(psi), 32) == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("disorder-free chain spreads ballistically") {
  ExperimentSpec spec;
  spec.samples = 1;
  spec.dynamic.strength_std = 0.0;
  spec.lattice.num_sites = auto_size_lattice(spec);
  spec.lattice.initial_site = spec.lattice.num_sites / 2;
  const auto s = run_sample(spec, 0);
  REQUIRE(s.max_boundary_leak < 1e-8);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < s.exponent_times.size(); ++i) {
    if (s.exponent_times[i] < 10.0 || s.exponent_times[i] > 100.0) continue;
    CHECK(std::abs(s.exponent[i] - 2.0) < 0.05);
    ++checked;
  }
  CHECK(checked > 60);
}
