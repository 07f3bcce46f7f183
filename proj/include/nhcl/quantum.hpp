#pragma once

// Propagation of i hbar psi' = (H - i Gamma) psi and of its normalized form,
// expectation values, covariances and the generalized Ehrenfest check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nhcl/coherent.hpp"
#include "nhcl/ode.hpp"
#include "nhcl/operators.hpp"
#include "nhcl/state.hpp"

namespace nhcl {

inline cplx expectation(const CVector& psi, const Operator& a) {
  const double n = psi.squaredNorm();
  if (!(n > 0.0)) throw error(errc::degenerate_state, "expectation of a zero-norm state");
  if (a.rows() != psi.size() || a.cols() != psi.size())
    throw error(errc::invalid_dimension, "operator and state dimensions differ");
  return psi.dot(a * psi) / n;
}

inline cplx expectation(const QuantumState& state, const Operator& a) {
  return expectation(state.amplitudes(), a);
}

// Real expectation of a Hermitian operator; a visible imaginary part means a is not Hermitian.
inline double expectation_real(const CVector& psi, const Operator& a) {
  const cplx v = expectation(psi, a);
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
    throw error(errc::consistency, "expectation has imaginary part " + std::to_string(v.imag()));
  return v.real();
}

inline double expectation_real(const QuantumState& state, const Operator& a) {
  return expectation_real(state.amplitudes(), a);
}

// <{A,B}/2> - <A><B> for Hermitian A, B.
inline double covariance(const CVector& psi, const Operator& a, const Operator& b) {
  const CVector ap = a * psi;
  const CVector bp = b * psi;
  const double n = psi.squaredNorm();
  if (!(n > 0.0)) throw error(errc::degenerate_state, "covariance of a zero-norm state");
  const double sym = ap.dot(bp).real() / n;  // Re<A psi|B psi> = <{A,B}>/2
  return sym - (psi.dot(ap).real() / n) * (psi.dot(bp).real() / n);
}

inline double covariance(const QuantumState& state, const Operator& a, const Operator& b) {
  return covariance(state.amplitudes(), a, b);
}

struct Series {
  std::string name;
  std::vector<double> values;
};

struct QuantumTrajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::vector<double> norms;
  std::vector<Series> observables;  // insertion order is the CSV column order
  std::vector<std::string> warnings;

  const std::vector<double>& observable(const std::string& name) const {
    for (const auto& s : observables)
      if (s.name == name) return s.values;
    throw error(errc::invalid_parameter, "no observable named " + name);
  }
};

// Linear generator K(t) = -(i/hbar)(H + f_t D - i Gamma).
class Generator {
 public:
  Generator(const HamiltonianSpec& spec, std::size_t dim) : spec_(spec) {
    HamiltonianParts parts = hamiltonian_parts(spec, dim);
    const double inv_hbar = 1.0 / spec.action();
    static_part_ = (-I * inv_hbar) * (parts.H - I * parts.Gamma);
    if (spec.time_dependent()) drive_part_ = (-I * inv_hbar) * parts.drive_op;
    parts_ = std::move(parts);
  }

  bool time_dependent() const { return drive_part_.size() != 0; }
  const Operator& static_part() const { return static_part_; }
  const HamiltonianParts& parts() const { return parts_; }
  Operator H_at(double t) const { return parts_.H_at(t, spec_.drive); }

  template <class M>
  M apply(double t, const M& y) const {
    M out = static_part_ * y;
    if (time_dependent()) out += spec_.drive->at(t) * (drive_part_ * y);
    return out;
  }

 private:
  HamiltonianSpec spec_;
  HamiltonianParts parts_;
  Operator static_part_;
  Operator drive_part_;
};

enum class Backend { automatic, exponential, runge_kutta };

namespace detail {

inline double relative_error_ratio(double err_norm, double y_old, double y_new, double tol) {
  const double scale = std::max(y_old, y_new);
  return scale > 0.0 ? err_norm / (tol * scale) : err_norm / tol;
}

inline void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw error(errc::invalid_parameter, "empty time grid");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw error(errc::invalid_parameter, "time grid must be increasing");
}

// Propagates columns of y over the grid; observe(k, t, Y) sees every grid point.
template <class M, class Observe>
void propagate_linear(const Generator& gen, const M& y0, std::span<const double> grid, double tol,
                      Backend backend, Observe&& observe) {
  check_grid(grid);
  if (!(tol > 0)) throw error(errc::invalid_parameter, "tolerance must be positive");
  const bool exact = backend == Backend::exponential ||
                     (backend == Backend::automatic && !gen.time_dependent());
  if (exact) {
    if (gen.time_dependent())
      throw error(errc::spec_error, "exponential backend needs a time-independent Hamiltonian");
    std::vector<std::pair<double, Operator>> cache;
    M y = y0;
    observe(std::size_t{0}, grid[0], static_cast<const M&>(y));
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const double dt = grid[k] - grid[k - 1];
      const Operator* u = nullptr;
      for (const auto& [h, m] : cache)
        if (std::abs(h - dt) <= 1e-14 * dt) u = &m;
      if (!u) {
        cache.emplace_back(dt, expm(gen.static_part() * dt));
        u = &cache.back().second;
      }
      y = (*u) * y;
      observe(k, grid[k], static_cast<const M&>(y));
    }
    return;
  }
  ode::Options opt;
  opt.tol = tol;
  auto rhs = [&gen](double t, const M& y) { return gen.template apply<M>(t, y); };
  auto ratio = [tol](const M& err, const M& y_old, const M& y_new) {
    return relative_error_ratio(err.norm(), y_old.norm(), y_new.norm(), tol);
  };
  ode::integrate<M>(rhs, y0, grid, opt, ratio, observe);
}

}  // namespace detail

// Standard observables recorded along quantum trajectories.
class ObservableSet {
 public:
  ObservableSet(const HamiltonianSpec& spec, std::size_t dim) : spec_(spec) {
    if (spec.is_spin()) {
      const auto [lx, ly, lz] = angular_momentum_matrices(spec.spin.L);
      const double s = 1.0 / (2.0 * spec.spin.L);
      ops_ = {{"sx", s * lx}, {"sy", s * ly}, {"sz", s * lz}};
    } else {
      const auto [q, p] = position_momentum(dim, spec.m, spec.frame_omega(), spec.hbar);
      ops_ = {{"q", q}, {"p", p}, {"H", hamiltonian_parts(spec, dim).H}};
    }
  }

  std::vector<Series> empty_series() const {
    std::vector<Series> out;
    for (const auto& [name, op] : ops_) out.push_back({name, {}});
    return out;
  }

  void record(const CVector& psi, std::vector<Series>& into) const {
    for (std::size_t j = 0; j < ops_.size(); ++j) into[j].values.push_back(expectation_real(psi, ops_[j].second));
  }

 private:
  HamiltonianSpec spec_;
  std::vector<std::pair<std::string, Operator>> ops_;
};

inline constexpr double kLeakageThreshold = 1e-6;

// Population in the top two Fock levels relative to the norm.
inline double top_level_leakage(const CVector& psi) {
  const Eigen::Index n = psi.size();
  if (n < 3) return 0.0;
  return (std::norm(psi(n - 1)) + std::norm(psi(n - 2))) / psi.squaredNorm();
}

inline QuantumTrajectory propagate(const HamiltonianSpec& spec, std::size_t dim, const QuantumState& psi0,
                                   std::span<const double> t_grid, double tol = 1e-10,
                                   Backend backend = Backend::automatic) {
  if (psi0.dim() != dim) throw error(errc::invalid_dimension, "initial state dimension must equal dim");
  const Generator gen(spec, dim);
  const ObservableSet obs(spec, dim);
  QuantumTrajectory traj;
  traj.observables = obs.empty_series();
  traj.times.reserve(t_grid.size());
  traj.states.reserve(t_grid.size());
  double worst_leak = 0.0, worst_t = 0.0;
  detail::propagate_linear<CVector>(
      gen, psi0.amplitudes(), t_grid, tol, backend,
      [&](std::size_t, double t, const CVector& y) {
        traj.times.push_back(t);
        traj.states.emplace_back(y, t);
        traj.norms.push_back(traj.states.back().norm_sq());
        obs.record(y, traj.observables);
        if (!spec.is_spin()) {
          const double leak = top_level_leakage(y);
          if (leak > worst_leak) worst_leak = leak, worst_t = t;
        }
      });
  if (worst_leak > kLeakageThreshold)
    traj.warnings.push_back("truncation leakage " + std::to_string(worst_leak) + " in top two levels at t=" +
                            std::to_string(worst_t) + " (dim " + std::to_string(dim) + ")");
  return traj;
}

// i hbar phi' = H phi - i (Gamma - <Gamma>) phi; always adaptive Runge-Kutta.
inline QuantumTrajectory propagate_normalized(const HamiltonianSpec& spec, std::size_t dim,
                                              const QuantumState& phi0, std::span<const double> t_grid,
                                              double tol = 1e-10) {
  if (phi0.dim() != dim) throw error(errc::invalid_dimension, "initial state dimension must equal dim");
  detail::check_grid(t_grid);
  const HamiltonianParts parts = hamiltonian_parts(spec, dim);
  const ObservableSet obs(spec, dim);
  const double inv_hbar = 1.0 / spec.action();
  const Operator kh = (-I * inv_hbar) * parts.H;
  const Operator kd = spec.time_dependent() ? Operator((-I * inv_hbar) * parts.drive_op) : Operator();
  const Operator& gamma = parts.Gamma;

  auto rhs = [&](double t, const CVector& phi) -> CVector {
    const CVector gp = gamma * phi;
    const double mean = phi.dot(gp).real() / phi.squaredNorm();
    CVector out = kh * phi - inv_hbar * (gp - mean * phi);
    if (kd.size() != 0) out += spec.drive->at(t) * (kd * phi);
    return out;
  };
  auto ratio = [tol](const CVector& err, const CVector& y_old, const CVector& y_new) {
    return detail::relative_error_ratio(err.norm(), y_old.norm(), y_new.norm(), tol);
  };

  QuantumTrajectory traj;
  traj.observables = obs.empty_series();
  ode::Options opt;
  opt.tol = tol;
  ode::integrate<CVector>(rhs, phi0.amplitudes(), t_grid, opt, ratio,
                          [&](std::size_t, double t, const CVector& y) {
                            traj.times.push_back(t);
                            traj.states.emplace_back(y, t);
                            traj.norms.push_back(traj.states.back().norm_sq());
                            obs.record(y, traj.observables);
                          });
  return traj;
}

struct EhrenfestReport {
  std::vector<double> times;         // interior grid points
  std::vector<double> residual;      // |d<A>/dt - <[A,H]>/(i hbar) + 2 cov(A,Gamma)/hbar|
  std::vector<double> norm_residual; // |hbar dn/dt + 2 <psi|Gamma|psi>|
  std::vector<double> dissipation;   // |hbar d<H>/dt + 2 cov(H,Gamma)|, static Hamiltonians only

  static double max_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  }
};

// Compares centered differences along traj with the right-hand sides of the
// generalized Heisenberg equation, the norm equation and the energy balance.
inline EhrenfestReport verify_generalized_ehrenfest(const QuantumTrajectory& traj, const Operator& a,
                                                    const HamiltonianSpec& spec) {
  const std::size_t n = traj.states.size();
  if (n < 3) throw error(errc::insufficient_data, "need at least 3 time points");
  const std::size_t dim = traj.states.front().dim();
  const HamiltonianParts parts = hamiltonian_parts(spec, dim);
  const double hbar = spec.action();
  const bool static_h = !spec.time_dependent();

  std::vector<double> mean_a(n), mean_h(n);
  for (std::size_t k = 0; k < n; ++k) {
    mean_a[k] = expectation_real(traj.states[k], a);
    if (static_h) mean_h[k] = expectation_real(traj.states[k], parts.H);
  }

  EhrenfestReport rep;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double t = traj.times[k];
    const double span = traj.times[k + 1] - traj.times[k - 1];
    const CVector& psi = traj.states[k].amplitudes();
    const Operator h = parts.H_at(t, spec.drive);

    const double da = (mean_a[k + 1] - mean_a[k - 1]) / span;
    const cplx comm = expectation(psi, commutator(a, h)) / (I * hbar);
    const double predicted = comm.real() - 2.0 * covariance(psi, a, parts.Gamma) / hbar;
    rep.times.push_back(t);
    rep.residual.push_back(std::abs(da - predicted));

    const double dn = (traj.norms[k + 1] - traj.norms[k - 1]) / span;
    rep.norm_residual.push_back(std::abs(hbar * dn + 2.0 * psi.dot(parts.Gamma * psi).real()));

    if (static_h) {
      const double dh = (mean_h[k + 1] - mean_h[k - 1]) / span;
      rep.dissipation.push_back(std::abs(hbar * dh + 2.0 * covariance(psi, parts.H, parts.Gamma)));
    }
  }
  return rep;
}

}  // namespace nhcl
