#include "jch/propagator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "jch/error.hpp"

namespace jch {
namespace {

constexpr Amplitude minus_i{0.0, -1.0};

using ConstVec = Eigen::Map<const Eigen::VectorXcd>;
using Vec = Eigen::Map<Eigen::VectorXcd>;

ConstVec view(std::span<const Amplitude> v) { return ConstVec(v.data(), static_cast<Eigen::Index>(v.size())); }
Vec view(std::span<Amplitude> v) { return Vec(v.data(), static_cast<Eigen::Index>(v.size())); }

double norm2(std::span<const Amplitude> v) { return view(v).squaredNorm(); }

Amplitude dot(std::span<const Amplitude> a, std::span<const Amplitude> b) { return view(a).dot(view(b)); }

// y -= c x
void subtract_scaled(std::span<Amplitude> y, Amplitude c, std::span<const Amplitude> x) { view(y) -= c * view(x); }

bool all_finite(std::span<const Amplitude> v) {
  return std::all_of(v.begin(), v.end(), [](const Amplitude& a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); });
}

// exp(-i T dt) e_1 for the Lanczos tridiagonal T, via its eigensystem.
class TridiagonalExponential {
 public:
  void compute(std::span<const double> alpha, std::span<const double> beta) {
    const auto k = static_cast<Eigen::Index>(alpha.size());
    diag_ = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k);
    sub_ = Eigen::Map<const Eigen::VectorXd>(beta.data(), std::max<Eigen::Index>(k - 1, 0));
    solver_.computeFromTridiagonal(diag_, sub_, Eigen::ComputeEigenvectors);
  }

  /// Fills `out` with exp(-i T dt) e_1.
  void exp_e1(double dt, std::vector<Amplitude>& out) const {
    const auto& q = solver_.eigenvectors();
    const auto& lambda = solver_.eigenvalues();
    const Eigen::Index k = lambda.size();
    phases_.resize(static_cast<std::size_t>(k));
    for (Eigen::Index l = 0; l < k; ++l) phases_[static_cast<std::size_t>(l)] = q(0, l) * std::exp(minus_i * (lambda(l) * dt));
    out.assign(static_cast<std::size_t>(k), Amplitude{0.0, 0.0});
    for (Eigen::Index row = 0; row < k; ++row) {
      Amplitude s{0.0, 0.0};
      for (Eigen::Index l = 0; l < k; ++l) s += q(row, l) * phases_[static_cast<std::size_t>(l)];
      out[static_cast<std::size_t>(row)] = s;
    }
  }

 private:
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver_;
  Eigen::VectorXd diag_;
  Eigen::VectorXd sub_;
  mutable std::vector<Amplitude> phases_;
};

[[noreturn]] void propagation_failure(std::string_view method, double dt, double error, double tolerance,
                                      std::size_t order) {
  std::ostringstream msg;
  msg << "propagation error (" << method << "): local error " << error << " exceeds tolerance " << tolerance
      << " at order " << order << " even with substep " << dt;
  throw NumericalError(msg.str());
}

}  // namespace

double WaveFunction::norm_squared() const { return norm2(amplitudes); }

std::string_view to_string(PropagationMethod method) {
  switch (method) {
    case PropagationMethod::krylov: return "krylov";
    case PropagationMethod::chebyshev: return "chebyshev";
    case PropagationMethod::dense_oracle: return "dense-oracle";
  }
  return "unknown";
}

PropagationMethod parse_propagation_method(std::string_view name) {
  if (name == "krylov") return PropagationMethod::krylov;
  if (name == "chebyshev") return PropagationMethod::chebyshev;
  if (name == "dense-oracle") return PropagationMethod::dense_oracle;
  throw ConfigError("propagator: unknown method '" + std::string(name) + "'");
}

void PropagatorConfig::validate() const {
  if (!(tolerance > 0.0)) throw ConfigError("propagator: tolerance must be > 0");
  if (!(substep > 0.0) || !std::isfinite(substep)) throw ConfigError("propagator: substep must be > 0");
  if (!(norm_drift_limit > 0.0)) throw ConfigError("propagator: norm_drift_limit must be > 0");
  if (krylov_dim < 2) throw ConfigError("propagator: krylov_dim must be >= 2");
  if (chebyshev_order < 2) throw ConfigError("propagator: chebyshev_order must be >= 2");
}

Propagator::Propagator(PropagatorConfig config) : config_(config) { config_.validate(); }

void Propagator::advance(std::vector<Amplitude>& amplitudes, const HamiltonianMatrix& h, double duration) {
  if (amplitudes.size() != h.dimension())
    throw ConfigError("evolve: wavefunction size " + std::to_string(amplitudes.size()) +
                      " does not match Hamiltonian dimension " + std::to_string(h.dimension()));
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("evolve: duration must be >= 0");
  if (duration == 0.0) return;

  const double before = norm2(amplitudes);
  switch (config_.method) {
    case PropagationMethod::krylov: advance_krylov(amplitudes, h, duration); break;
    case PropagationMethod::chebyshev: advance_chebyshev(amplitudes, h, duration); break;
    case PropagationMethod::dense_oracle: advance_dense(amplitudes, h, duration); break;
  }
  if (!all_finite(amplitudes)) throw NumericalError("propagation error: non-finite amplitudes");
  const double drift = std::abs(norm2(amplitudes) - before);
  if (drift > config_.norm_drift_limit) {
    std::ostringstream msg;
    msg << "propagation error: norm drift " << drift << " over duration " << duration << " exceeds "
        << config_.norm_drift_limit;
    throw NumericalError(msg.str());
  }
}

void Propagator::advance_krylov(std::vector<Amplitude>& psi, const HamiltonianMatrix& h, double duration) {
  const std::size_t n = psi.size();
  const std::size_t max_dim = std::min(config_.krylov_dim, n);
  if (basis_.size() < max_dim + 1 || (!basis_.empty() && basis_[0].size() != n))
    basis_.assign(max_dim + 1, std::vector<Amplitude>(n));
  work_.resize(n);

  const auto [lo, hi] = h.spectral_bounds();
  const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
  std::vector<double> alpha(max_dim), beta(max_dim);
  TridiagonalExponential small;
  std::vector<Amplitude> coeffs;

  double remaining = duration;
  double dt_try = std::min(config_.substep, duration);
  while (remaining > 0.0) {
    double dt = std::min(dt_try, remaining);
    const double psi_norm = std::sqrt(norm2(psi));
    if (psi_norm == 0.0) return;

    auto& v0 = basis_[0];
    for (std::size_t i = 0; i < n; ++i) v0[i] = psi[i] / psi_norm;

    std::size_t dim = 0;
    bool shrunk = false;
    // Leading Taylor term of the error: beta_1 ... beta_j dt^j / j!
    double taylor = psi_norm;
    for (std::size_t j = 0; j < max_dim; ++j) {
      h.apply(basis_[j], work_);
      ++stats_.matvecs;
      if (j > 0) {
        const auto& prev = basis_[j - 1];
        subtract_scaled(work_, beta[j - 1], prev);
      }
      const auto& vj = basis_[j];
      alpha[j] = dot(vj, work_).real();
      subtract_scaled(work_, alpha[j], vj);
      // one pass of full reorthogonalisation keeps the basis unitary to rounding
      for (std::size_t k = 0; k <= j; ++k) {
        const Amplitude c = dot(basis_[k], work_);
        subtract_scaled(work_, c, basis_[k]);
      }
      const double b = std::sqrt(norm2(work_));
      dim = j + 1;
      taylor *= b * dt / static_cast<double>(dim);

      const bool invariant = b <= 1e-14 * scale;
      const bool last = dim == max_dim;
      if (!invariant && !last && taylor > 1e3 * config_.tolerance) {
        beta[j] = b;
        auto& next = basis_[j + 1];
        for (std::size_t i = 0; i < n; ++i) next[i] = work_[i] / b;
        continue;
      }

      small.compute(std::span<const double>(alpha).first(dim), std::span<const double>(beta).first(dim - 1));
      auto error_at = [&](double step) {
        if (invariant) return 0.0;
        small.exp_e1(step, coeffs);
        return psi_norm * b * std::abs(coeffs[dim - 1]);
      };
      double err = error_at(dt);
      if (err <= config_.tolerance) break;
      if (last) {
        int halvings = 0;
        while (err > config_.tolerance) {
          if (++halvings > 60 || dt < duration * 1e-12) propagation_failure("krylov", dt, err, config_.tolerance, dim);
          dt *= 0.5;
          err = error_at(dt);
          ++stats_.step_rejections;
        }
        shrunk = true;
        break;
      }
      beta[j] = b;
      auto& next = basis_[j + 1];
      for (std::size_t i = 0; i < n; ++i) next[i] = work_[i] / b;
    }

    small.exp_e1(dt, coeffs);
    std::fill(psi.begin(), psi.end(), Amplitude{0.0, 0.0});
    for (std::size_t k = 0; k < dim; ++k) {
      subtract_scaled(psi, -psi_norm * coeffs[k], basis_[k]);
    }
    ++stats_.substeps;

    if (dt >= remaining) break;
    remaining -= dt;
    if (shrunk)
      dt_try = dt;
    else if (dim < max_dim / 2)
      dt_try = std::min(config_.substep, dt_try * 1.5);
  }
}

void Propagator::advance_chebyshev(std::vector<Amplitude>& psi, const HamiltonianMatrix& h, double duration) {
  const std::size_t n = psi.size();
  work_.resize(n);
  scratch_.resize(n);
  std::vector<Amplitude> acc(n), prev(n), cur(n);

  const auto [lo, hi] = h.spectral_bounds();
  const double center = 0.5 * (hi + lo);
  const double half_width = 0.5 * (hi - lo);

  double remaining = duration;
  double dt_try = std::min(config_.substep, duration);
  while (remaining > 0.0) {
    double dt = std::min(dt_try, remaining);
    const Amplitude phase = std::exp(minus_i * (center * dt));
    if (half_width <= 0.0) {
      for (auto& a : psi) a *= phase;
      ++stats_.substeps;
      if (dt >= remaining) break;
      remaining -= dt;
      continue;
    }

    // Expansion order: J_k(x) decays super-exponentially once k > x.
    std::size_t order = 0;
    for (;;) {
      const double x = half_width * dt;
      bessel_.clear();
      bool converged = false;
      for (std::size_t k = 0; k <= config_.chebyshev_order; ++k) {
        bessel_.push_back(std::cyl_bessel_j(static_cast<double>(k), x));
        if (k >= 1 && static_cast<double>(k) > x && std::abs(bessel_[k]) < 0.25 * config_.tolerance &&
            std::abs(bessel_[k - 1]) < config_.tolerance) {
          converged = true;
          order = k;
          break;
        }
      }
      if (converged) break;
      if (dt < duration * 1e-12) propagation_failure("chebyshev", dt, std::abs(bessel_.back()), config_.tolerance,
                                                     config_.chebyshev_order);
      dt *= 0.5;
      ++stats_.step_rejections;
    }
    const Amplitude step_phase = std::exp(minus_i * (center * dt));

    // Scaled operator (H - center) / half_width has spectrum in [-1, 1].
    auto apply_scaled = [&](const std::vector<Amplitude>& in, std::vector<Amplitude>& out) {
      h.apply(in, out);
      ++stats_.matvecs;
      for (std::size_t i = 0; i < n; ++i) out[i] = (out[i] - center * in[i]) / half_width;
    };

    prev = psi;
    apply_scaled(prev, cur);
    Amplitude coeff = 2.0 * minus_i * bessel_[1];
    for (std::size_t i = 0; i < n; ++i) acc[i] = bessel_[0] * prev[i] + coeff * cur[i];
    Amplitude power = minus_i;
    for (std::size_t k = 2; k <= order; ++k) {
      apply_scaled(cur, work_);
      for (std::size_t i = 0; i < n; ++i) work_[i] = 2.0 * work_[i] - prev[i];
      power *= minus_i;
      coeff = 2.0 * power * bessel_[k];
      for (std::size_t i = 0; i < n; ++i) acc[i] += coeff * work_[i];
      std::swap(prev, cur);
      std::swap(cur, work_);
    }
    for (std::size_t i = 0; i < n; ++i) psi[i] = step_phase * acc[i];
    ++stats_.substeps;

    if (dt >= remaining) break;
    remaining -= dt;
    dt_try = std::min(config_.substep, dt * 1.5);
  }
}

void Propagator::advance_dense(std::vector<Amplitude>& psi, const HamiltonianMatrix& h, double duration) {
  const auto n = static_cast<Eigen::Index>(h.dimension());
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = std::max<Eigen::Index>(0, i - 2); j < std::min<Eigen::Index>(n, i + 3); ++j)
      dense(i, j) = h.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  if (solver.info() != Eigen::Success) throw NumericalError("propagation error: dense eigendecomposition failed");

  Eigen::Map<Eigen::VectorXcd> state(psi.data(), n);
  Eigen::VectorXcd coeffs = solver.eigenvectors().transpose().cast<Amplitude>() * state;
  for (Eigen::Index l = 0; l < n; ++l) coeffs(l) *= std::exp(minus_i * (solver.eigenvalues()(l) * duration));
  state = solver.eigenvectors().cast<Amplitude>() * coeffs;
  ++stats_.substeps;
}

WaveFunction initial_state(const LatticeConfig& config) {
  config.validate();
  const SingleExcitationBasis basis(config.num_sites);
  WaveFunction psi;
  psi.amplitudes.assign(basis.dimension(), Amplitude{0.0, 0.0});
  const double w = 1.0 / std::sqrt(2.0);
  psi.amplitudes[basis.index(config.initial_site, Mode::photonic)] = w;
  psi.amplitudes[basis.index(config.initial_site, Mode::atomic)] = w;
  psi.time = 0.0;
  return psi;
}

WaveFunction evolve_interval(const WaveFunction& psi, const HamiltonianMatrix& h, double duration,
                             const PropagatorConfig& config) {
  WaveFunction out = psi;
  if (duration == 0.0) return out;
  Propagator propagator(config);
  propagator.advance(out.amplitudes, h, duration);
  out.time = psi.time + duration;
  return out;
}

void evolve_with_disorder(WaveFunction psi, const LatticeConfig& config, const DynamicDisorderTrajectory& trajectory,
                          std::span<const double> couplings, std::span<const double> record_times,
                          const PropagatorConfig& pconfig, const SnapshotVisitor& visit) {
  config.validate();
  if (trajectory.num_sites() != config.num_sites)
    throw ConfigError("evolve_with_disorder: trajectory covers " + std::to_string(trajectory.num_sites()) +
                      " sites, lattice has " + std::to_string(config.num_sites));
  if (psi.amplitudes.size() != 2 * config.num_sites)
    throw ConfigError("evolve_with_disorder: wavefunction dimension does not match lattice");
  if (!std::is_sorted(record_times.begin(), record_times.end()))
    throw ConfigError("evolve_with_disorder: record times must be sorted");
  if (!record_times.empty()) {
    if (record_times.front() < psi.time)
      throw ConfigError("evolve_with_disorder: record time before the current wavefunction time");
    if (record_times.back() > trajectory.horizon())
      throw ConfigError("evolve_with_disorder: record time " + std::to_string(record_times.back()) +
                        " beyond trajectory horizon " + std::to_string(trajectory.horizon()));
  }

  Propagator propagator(pconfig);
  const double initial_norm = psi.norm_squared();
  std::size_t interval = trajectory.interval_index(psi.time);
  std::size_t built_interval = trajectory.num_intervals();
  HamiltonianMatrix h;

  for (const double target : record_times) {
    while (psi.time < target) {
      const double boundary = trajectory.switching_time(interval + 1);
      const double stop = std::min(boundary, target);
      if (built_interval != interval) {
        h = build_hamiltonian(config, couplings, trajectory.interval_values(interval));
        built_interval = interval;
      }
      propagator.advance(psi.amplitudes, h, stop - psi.time);
      psi.time = stop;
      if (stop == boundary) ++interval;
    }
    const double drift = std::abs(psi.norm_squared() - initial_norm);
    if (drift > pconfig.norm_drift_limit) {
      std::ostringstream msg;
      msg << "propagation error: cumulative norm drift " << drift << " at t=" << psi.time << " exceeds "
          << pconfig.norm_drift_limit;
      throw NumericalError(msg.str());
    }
    visit(psi);
  }
}

std::vector<WaveFunction> evolve_with_disorder(const WaveFunction& psi, const LatticeConfig& config,
                                               const DynamicDisorderTrajectory& trajectory,
                                               std::span<const double> couplings,
                                               std::span<const double> record_times,
                                               const PropagatorConfig& pconfig) {
  std::vector<WaveFunction> snapshots;
  snapshots.reserve(record_times.size());
  evolve_with_disorder(psi, config, trajectory, couplings, record_times, pconfig,
                       [&](const WaveFunction& s) { snapshots.push_back(s); });
  return snapshots;
}

}  // namespace jch
