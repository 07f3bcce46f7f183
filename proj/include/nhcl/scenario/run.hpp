#pragma once

// Scenario pipelines and their CSV artifacts. The pipelines are also used by
// the acceptance checks so both exercise the same wiring.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nhcl/analytic.hpp"
#include "nhcl/classical.hpp"
#include "nhcl/coherent.hpp"
#include "nhcl/fixed_points.hpp"
#include "nhcl/husimi.hpp"
#include "nhcl/quantum.hpp"
#include "nhcl/scenario/config.hpp"

namespace nhcl::scenario {

struct OscillatorRun {
  HamiltonianSpec spec;
  QuantumTrajectory quantum;
  ClassicalTrajectory classical;
  std::vector<double> classical_norm;
};

inline QuantumState initial_oscillator_state(const ScenarioConfig& c, const HamiltonianSpec& spec,
                                             std::vector<std::string>* warnings = nullptr) {
  const Frame fr = frame_of(spec);
  const auto dim = static_cast<std::size_t>(c.dim);
  QuantumState psi = glauber_state(CoherentLabel::at(c.q0, c.p0, fr), dim, warnings);
  if (c.scenario == Kind::cat_state) {
    const QuantumState mirror = glauber_state(CoherentLabel::at(-c.q0, -c.p0, fr), dim, warnings);
    psi = QuantumState(psi.amplitudes() + mirror.amplitudes()).normalized();
  }
  return psi;
}

// Coherent components of the initial state: psi0 = sum of weight * |alpha>.
inline std::vector<std::pair<double, cplx>> initial_components(const ScenarioConfig& c, const HamiltonianSpec& spec) {
  const Frame fr = frame_of(spec);
  const cplx a = fr.alpha(c.q0, c.p0);
  if (c.scenario != Kind::cat_state) return {{1.0, a}};
  const auto dim = static_cast<std::size_t>(c.dim);
  const double n = (glauber_state({a, fr}, dim).amplitudes() + glauber_state({-a, fr}, dim).amplitudes()).norm();
  return {{1.0 / n, a}, {1.0 / n, -a}};
}

// Trajectory from the exact driven-oscillator solution, sampled on the grid.
// Its error does not grow with time, unlike Fock-basis propagation of states
// far from the vacuum.
inline QuantumTrajectory closed_form_trajectory(const HamiltonianSpec& spec, std::size_t dim,
                                                const std::vector<std::pair<double, cplx>>& components,
                                                std::span<const double> grid) {
  const auto par = analytic::DrivenHOParams::from(spec.omega, spec.gamma(), spec.drive ? spec.drive->Omega : 1.0,
                                                  spec.drive ? spec.drive->f0 : 0.0, spec.hbar);
  const ObservableSet obs(spec, dim);
  QuantumTrajectory traj;
  traj.observables = obs.empty_series();
  double worst_leak = 0.0, worst_t = 0.0;
  for (double t : grid) {
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(dim));
    for (const auto& [w, a] : components) psi += w * analytic::exact_driven_state(par, a, t, dim).amplitudes();
    traj.times.push_back(t);
    traj.states.emplace_back(psi, t);
    traj.norms.push_back(traj.states.back().norm_sq());
    obs.record(psi, traj.observables);
    const double leak = top_level_leakage(psi);
    if (leak > worst_leak) worst_leak = leak, worst_t = t;
  }
  if (worst_leak > kLeakageThreshold)
    traj.warnings.push_back("truncation leakage " + std::to_string(worst_leak) + " in top two levels at t=" +
                            std::to_string(worst_t) + " (dim " + std::to_string(dim) + ")");
  return traj;
}

inline OscillatorRun run_oscillator(const ScenarioConfig& c) {
  OscillatorRun r;
  r.spec = oscillator_spec(c);
  const auto grid = time_grid(c);
  const auto dim = static_cast<std::size_t>(c.dim);
  std::vector<std::string> warnings;
  const QuantumState psi0 = initial_oscillator_state(c, r.spec, &warnings);
  r.quantum = c.quantum == QuantumSource::closed_form
                  ? closed_form_trajectory(r.spec, dim, initial_components(c, r.spec), grid)
                  : propagate(r.spec, dim, psi0, grid, c.tol);
  r.quantum.warnings.insert(r.quantum.warnings.begin(), warnings.begin(), warnings.end());
  const PhaseGeometry geom = PhaseGeometry::flat(r.spec.m * r.spec.frame_omega());
  r.classical = integrate(geom, ClassicalHamiltonian::oscillator(r.spec), PhasePoint::flat(c.q0, c.p0), grid, c.tol);
  r.classical_norm = classical_norm(r.classical, oscillator_gamma0(r.spec), r.spec.hbar);
  return r;
}

// Limit cycle q(t) = Q cos(Omega t - delta), p = m (qdot + gamma q).
struct LimitCyclePath {
  analytic::LimitCycle cycle;
  double Omega = 1.0, m = 1.0, gamma = 0.0;

  double q(double t) const { return cycle.Q * std::cos(Omega * t - cycle.delta); }
  double p(double t) const {
    return m * (-cycle.Q * Omega * std::sin(Omega * t - cycle.delta) + gamma * q(t));
  }
};

inline LimitCyclePath limit_cycle_path(const HamiltonianSpec& spec) {
  if (!spec.drive) throw error(errc::spec_error, "limit cycle needs a drive");
  const double gamma = spec.gamma();
  const double F0 = analytic::force_amplitude(spec.drive->f0, spec.m, spec.omega, spec.hbar);
  return {analytic::limit_cycle(spec.omega * spec.omega + gamma * gamma, gamma, spec.drive->Omega, F0),
          spec.drive->Omega, spec.m, gamma};
}

struct SpinRun {
  HamiltonianSpec spec;
  QuantumTrajectory quantum;
  ClassicalTrajectory classical;
  std::vector<double> classical_norm;
};

inline SpinRun run_spin(const ScenarioConfig& c) {
  SpinRun r;
  r.spec = spin_spec(c);
  const auto grid = time_grid(c);
  const QuantumState psi0 = su2_state(c.theta0, c.phi0, c.L);
  r.quantum = propagate(r.spec, spin_dimension(c.L), psi0, grid, c.tol);
  const BlochVector b = bloch_expectations(psi0, c.L);
  Eigen::Vector3d s0(b[0], b[1], b[2]);
  s0 *= 0.5 / s0.norm();
  r.classical = integrate(PhaseGeometry::bloch_cartesian(),
                          ClassicalHamiltonian::bloch_cartesian(c.epsilon, c.v, c.g, c.gamma),
                          PhasePoint::bloch(s0(0), s0(1), s0(2)), grid, c.tol);
  // <Gamma> = 2 gamma L (2 sz + 1) in a coherent state: Gamma(s) = 4 gamma L sz plus 2 gamma L.
  std::vector<double> big_gamma;
  for (const Vec& s : r.classical.points) big_gamma.push_back(4.0 * c.gamma * c.L * s(2));
  r.classical_norm = classical_norm(r.classical.times, big_gamma, 2.0 * c.gamma * c.L, 1.0);
  return r;
}

inline HusimiField run_husimi(const ScenarioConfig& c, const OscillatorRun& r) {
  const double period = 2.0 * M_PI / c.Omega;
  const double end = c.window_end.value_or(c.t_end);
  const double begin = c.window_begin.value_or(end - period);
  return husimi_grid(r.quantum, frame_of(r.spec), {c.q_min, c.q_max, c.n_q}, {c.p_min, c.p_max, c.n_p}, begin, end);
}

namespace detail {

inline std::string num(double x) { return format_double(x); }

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path, std::ios::binary) {
    if (!out_) throw error(errc::config, "out: cannot write " + path.string());
    out_ << header << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) out_ << ',';
      out_ << num(v);
      first = false;
    }
    out_ << '\n';
  }
  std::ofstream& stream() { return out_; }

 private:
  std::ofstream out_;
};

}  // namespace detail

struct RunReport {
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  std::vector<std::string> lines;  // human-readable summary
  bool ok = true;
};

inline void write_oscillator(const std::filesystem::path& dir, const OscillatorRun& r, RunReport& rep) {
  {
    detail::CsvWriter w(dir / "trajectory.csv", "t,q,p,H,norm");
    const auto &q = r.quantum.observable("q"), &p = r.quantum.observable("p"), &h = r.quantum.observable("H");
    for (std::size_t k = 0; k < r.quantum.times.size(); ++k) w.row({r.quantum.times[k], q[k], p[k], h[k], r.quantum.norms[k]});
  }
  {
    detail::CsvWriter w(dir / "classical.csv", "t,q,p,norm");
    for (std::size_t k = 0; k < r.classical.times.size(); ++k)
      w.row({r.classical.times[k], r.classical.points[k](0), r.classical.points[k](1), r.classical_norm[k]});
  }
  rep.files.insert(rep.files.end(), {"trajectory.csv", "classical.csv"});
  if (r.spec.drive) {
    const LimitCyclePath lc = limit_cycle_path(r.spec);
    detail::CsvWriter w(dir / "limit_cycle.csv", "t,q,p");
    for (double t : r.quantum.times) w.row({t, lc.q(t), lc.p(t)});
    rep.files.push_back("limit_cycle.csv");
  }
  rep.warnings.insert(rep.warnings.end(), r.quantum.warnings.begin(), r.quantum.warnings.end());
}

inline void write_husimi(const std::filesystem::path& dir, const HusimiField& f, RunReport& rep) {
  {
    detail::CsvWriter w(dir / "husimi.csv", "q,p,value");
    for (int i = 0; i < f.q_axis.n; ++i)
      for (int j = 0; j < f.p_axis.n; ++j) w.row({f.q_axis.at(i), f.p_axis.at(j), f.value(i, j)});
  }
  {
    detail::CsvWriter w(dir / "ridge.csv", "q,p");
    for (const auto& [q, p] : f.ridge) w.row({q, p});
  }
  rep.files.insert(rep.files.end(), {"husimi.csv", "ridge.csv"});
  rep.lines.push_back("husimi snapshots averaged: " + std::to_string(f.snapshots));
}

inline void write_spin(const std::filesystem::path& dir, const SpinRun& r, RunReport& rep) {
  {
    detail::CsvWriter w(dir / "trajectory.csv", "t,sx,sy,sz,norm");
    const auto &x = r.quantum.observable("sx"), &y = r.quantum.observable("sy"), &z = r.quantum.observable("sz");
    for (std::size_t k = 0; k < r.quantum.times.size(); ++k) w.row({r.quantum.times[k], x[k], y[k], z[k], r.quantum.norms[k]});
  }
  {
    detail::CsvWriter w(dir / "classical.csv", "t,sx,sy,sz,norm");
    for (std::size_t k = 0; k < r.classical.times.size(); ++k) {
      const Vec& s = r.classical.points[k];
      w.row({r.classical.times[k], s(0), s(1), s(2), r.classical_norm[k]});
    }
  }
  rep.files.insert(rep.files.end(), {"trajectory.csv", "classical.csv"});
  rep.lines.push_back("max sphere drift before projection: " + detail::num(r.classical.max_sphere_drift));
}

inline void write_fixed_points(const std::filesystem::path& dir, const std::vector<FixedPoint>& fps, RunReport& rep) {
  detail::CsvWriter w(dir / "fixed_points.csv", "sx,sy,sz,kind,re_lambda1,im_lambda1,re_lambda2,im_lambda2");
  for (const FixedPoint& f : fps) {
    w.stream() << detail::num(f.s(0)) << ',' << detail::num(f.s(1)) << ',' << detail::num(f.s(2)) << ','
               << to_string(f.kind) << ',' << detail::num(f.lambda1.real()) << ',' << detail::num(f.lambda1.imag())
               << ',' << detail::num(f.lambda2.real()) << ',' << detail::num(f.lambda2.imag()) << '\n';
    rep.lines.push_back(std::string(to_string(f.kind)) + " at (" + detail::num(f.s(0)) + ", " + detail::num(f.s(1)) +
                        ", " + detail::num(f.s(2)) + ")");
  }
  rep.files.push_back("fixed_points.csv");
}

inline void write_meta(const std::filesystem::path& dir, const ScenarioConfig& c, RunReport& rep) {
  std::ofstream out(dir / "meta.txt", std::ios::binary);
  if (!out) throw error(errc::config, "out: cannot write meta.txt");
  out << "# reproduces: " << reproduces(c.scenario) << '\n';
  for (const std::string& w : rep.warnings) out << "# warning: " << w << '\n';
  out << to_text(c);
  rep.files.push_back("meta.txt");
}

}  // namespace nhcl::scenario
