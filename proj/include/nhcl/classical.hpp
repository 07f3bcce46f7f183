#pragma once

// Classical limit: the flow Omega^{-1} grad H - G^{-1} grad Gamma on the plane
// and on the Bloch sphere, trajectory integration and the classical norm.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhcl/geometry.hpp"
#include "nhcl/ode.hpp"
#include "nhcl/operators.hpp"

namespace nhcl {

struct ClassicalHamiltonian {
  Chart chart = Chart::flat_qp;
  std::function<double(const Vec&, double)> H;
  std::function<Vec(const Vec&, double)> grad_H;
  std::function<double(const Vec&)> Gamma;
  std::function<Vec(const Vec&)> grad_Gamma;

  // Oscillator families in physical (q, p). The drive enters as
  // sqrt(2 m hbar w') f_t q, the image of hbar f_t (a + a^dag) in the frame w'.
  static ClassicalHamiltonian oscillator(const HamiltonianSpec& spec) {
    spec.validate();
    if (spec.is_spin()) throw error(errc::spec_error, "oscillator Hamiltonian requested for the spin family");
    const double m = spec.m, w = spec.omega, beta = spec.beta, k = spec.damping.k;
    const double force = std::sqrt(2.0 * m * spec.hbar * spec.frame_omega());
    const auto drive = spec.time_dependent() ? spec.drive : std::nullopt;
    const DampingKind kind = spec.damping.kind;

    ClassicalHamiltonian h;
    h.chart = Chart::flat_qp;
    h.H = [=](const Vec& x, double t) {
      const double q = x(0), p = x(1);
      double e = p * p / (2 * m) + 0.5 * m * w * w * q * q + 0.25 * beta * q * q * q * q;
      if (drive) e += force * drive->at(t) * q;
      return e;
    };
    h.grad_H = [=](const Vec& x, double t) {
      const double q = x(0), p = x(1);
      double dq = m * w * w * q + beta * q * q * q;
      if (drive) dq += force * drive->at(t);
      return Vec{{dq, p / m}};
    };
    h.Gamma = [=](const Vec& x) {
      const double q = x(0), p = x(1);
      switch (kind) {
        case DampingKind::proportional_to_H0: return k * (p * p / (2 * m) + 0.5 * m * w * w * q * q);
        case DampingKind::kinetic_only: return k * p * p / (2 * m);
        case DampingKind::none: return 0.0;
      }
      return 0.0;
    };
    h.grad_Gamma = [=](const Vec& x) {
      const double q = x(0), p = x(1);
      switch (kind) {
        case DampingKind::proportional_to_H0: return Vec{{k * m * w * w * q, k * p / m}};
        case DampingKind::kinetic_only: return Vec{{0.0, k * p / m}};
        case DampingKind::none: break;
      }
      return Vec{{0.0, 0.0}};
    };
    return h;
  }

  // H = eps p + v sqrt(1-p^2) cos 2q + (g/2) p^2, Gamma = gamma p on the canonical chart (q, p).
  static ClassicalHamiltonian bloch_canonical(double eps, double v, double g, double gamma) {
    ClassicalHamiltonian h;
    h.chart = Chart::bloch_canonical;
    h.H = [=](const Vec& x, double) {
      const double q = x(0), p = x(1);
      return eps * p + v * std::sqrt(1 - p * p) * std::cos(2 * q) + 0.5 * g * p * p;
    };
    h.grad_H = [=](const Vec& x, double) {
      const double q = x(0), p = x(1);
      const double r = std::sqrt(1 - p * p);
      return Vec{{-2 * v * r * std::sin(2 * q), eps - v * p * std::cos(2 * q) / r + g * p}};
    };
    h.Gamma = [=](const Vec& x) { return gamma * x(1); };
    h.grad_Gamma = [=](const Vec&) { return Vec{{0.0, gamma}}; };
    return h;
  }

  // Same functions on the embedded sphere: H = 2 eps sz + 2 v sx + 2 g sz^2, Gamma = 2 gamma sz.
  static ClassicalHamiltonian bloch_cartesian(double eps, double v, double g, double gamma) {
    ClassicalHamiltonian h;
    h.chart = Chart::bloch_cartesian;
    h.H = [=](const Vec& s, double) { return 2 * eps * s(2) + 2 * v * s(0) + 2 * g * s(2) * s(2); };
    h.grad_H = [=](const Vec& s, double) { return Vec{{2 * v, 0.0, 2 * eps + 4 * g * s(2)}}; };
    h.Gamma = [=](const Vec& s) { return 2 * gamma * s(2); };
    h.grad_Gamma = [=](const Vec&) { return Vec{{0.0, 0.0, 2 * gamma}}; };
    return h;
  }
};

// Omega^{-1} grad H - G^{-1} grad Gamma. On the embedded sphere the same flow
// is grad H x s - (1/2)(1 - 4 s s^T) grad Gamma.
inline Vec flow_rhs(const PhaseGeometry& geom, const ClassicalHamiltonian& ham, const Vec& x, double t) {
  if (geom.chart != ham.chart)
    throw error(errc::spec_error, std::string("geometry chart ") + to_string(geom.chart) +
                                      " does not match Hamiltonian chart " + to_string(ham.chart));
  if (geom.chart == Chart::bloch_cartesian) {
    const Eigen::Vector3d s = x;
    const Eigen::Vector3d gh = ham.grad_H(x, t);
    const Eigen::Vector3d gg = ham.grad_Gamma(x);
    const Eigen::Vector3d out = gh.cross(s) - 0.5 * (gg - 4.0 * s * s.dot(gg));
    return out;
  }
  if (geom.chart == Chart::bloch_canonical && !(1.0 - x(1) * x(1) > kPoleMargin))
    throw error(errc::chart_singularity, "canonical Bloch chart is singular at |p| = 1");
  const Mat omega = geom.Omega(x);
  const Mat g = geom.G(x);
  return omega.partialPivLu().solve(ham.grad_H(x, t)) - g.llt().solve(ham.grad_Gamma(x));
}

// Flat-chart oscillator field for the HamiltonianSpec damping kind and frame frequency.
inline Vec oscillator_rhs(const HamiltonianSpec& spec, const Vec& x, double t) {
  return flow_rhs(PhaseGeometry::flat(spec.m * spec.frame_omega()), ClassicalHamiltonian::oscillator(spec), x, t);
}

inline Eigen::Vector3d bloch_rhs(double eps, double v, double g, double gamma, const Eigen::Vector3d& s) {
  const double sx = s(0), sy = s(1), sz = s(2);
  return {-2 * eps * sy - 4 * g * sz * sy + 4 * gamma * sz * sx,
          2 * eps * sx + 4 * g * sz * sx - 2 * v * sz + 4 * gamma * sz * sy,
          2 * v * sy - gamma * (1 - 4 * sz * sz)};
}

struct ClassicalTrajectory {
  Chart chart = Chart::flat_qp;
  std::vector<double> times;
  std::vector<Vec> points;
  std::vector<double> H;
  std::vector<double> Gamma;
  std::vector<double> norm_factor;
  double max_sphere_drift = 0.0;  // largest |s.s - 1/4| seen before projection
};

using VectorField = std::function<Vec(double, const Vec&)>;

// Adaptive integration; per-component error scale is tol * (1 + |y_i|).
// On the embedded sphere every accepted step is projected back to radius 1/2.
inline ClassicalTrajectory integrate(const VectorField& rhs, const PhasePoint& x0, std::span<const double> t_grid,
                                     double tol = 1e-10) {
  x0.validate();
  ClassicalTrajectory out;
  out.chart = x0.chart;
  ode::Options opt;
  opt.tol = tol;
  auto ratio = [tol](const Vec& err, const Vec& y_old, const Vec& y_new) {
    const Vec scale = (tol * (1.0 + y_old.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array())).matrix();
    return err.cwiseQuotient(scale).cwiseAbs().maxCoeff();
  };
  std::function<void(double, Vec&)> project;
  if (x0.chart == Chart::bloch_cartesian) {
    project = [&out](double, Vec& s) {
      out.max_sphere_drift = std::max(out.max_sphere_drift, std::abs(s.squaredNorm() - 0.25));
      s *= 0.5 / s.norm();
    };
  }
  ode::integrate<Vec>(rhs, x0.coords, t_grid, opt, ratio,
                      [&out](std::size_t, double t, const Vec& y) {
                        out.times.push_back(t);
                        out.points.push_back(y);
                      },
                      project);
  return out;
}

inline ClassicalTrajectory integrate(const PhaseGeometry& geom, const ClassicalHamiltonian& ham, const PhasePoint& x0,
                                     std::span<const double> t_grid, double tol = 1e-10) {
  if (x0.chart != geom.chart) throw error(errc::spec_error, "initial point chart does not match the geometry");
  ClassicalTrajectory out =
      integrate([&](double t, const Vec& x) { return flow_rhs(geom, ham, x, t); }, x0, t_grid, tol);
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    out.H.push_back(ham.H(out.points[k], out.times[k]));
    out.Gamma.push_back(ham.Gamma(out.points[k]));
  }
  return out;
}

namespace detail {

// Integral over [a, b] of the quadratic through (t0,f0), (t1,f1), (t2,f2).
inline double quadratic_integral(double t0, double t1, double t2, double f0, double f1, double f2, double a, double b) {
  const double d1 = (f1 - f0) / (t1 - t0);
  const double d2 = ((f2 - f1) / (t2 - t1) - d1) / (t2 - t0);
  const double u1 = t1 - t0;
  auto prim = [&](double t) {
    const double u = t - t0;
    return f0 * u + 0.5 * d1 * u * u + d2 * (u * u * u / 3.0 - 0.5 * u1 * u * u);
  };
  return prim(b) - prim(a);
}

}  // namespace detail

// n(t) = exp(-(2/hbar) int_0^t (Gamma(x(s)) + Gamma0) ds), quadratic interpolation of the samples.
inline std::vector<double> classical_norm(const std::vector<double>& times, const std::vector<double>& gamma_values,
                                          double gamma0, double hbar) {
  if (times.size() != gamma_values.size()) throw error(errc::invalid_dimension, "times and Gamma series differ in length");
  if (!(hbar > 0)) throw error(errc::invalid_parameter, "hbar must be positive");
  std::vector<double> n(times.size(), 1.0);
  if (times.size() < 2) return n;
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    double piece;
    if (times.size() == 2) {
      piece = 0.5 * (gamma_values[0] + gamma_values[1]) * (times[1] - times[0]);
    } else {
      const std::size_t j = k == 0 ? 0 : k - 1;  // stencil j, j+1, j+2 covering [t_k, t_k+1]
      piece = detail::quadratic_integral(times[j], times[j + 1], times[j + 2], gamma_values[j], gamma_values[j + 1],
                                         gamma_values[j + 2], times[k], times[k + 1]);
    }
    integral += piece + gamma0 * (times[k + 1] - times[k]);
    n[k + 1] = std::exp(-2.0 / hbar * integral);
  }
  return n;
}

inline std::vector<double> classical_norm(const ClassicalTrajectory& traj, double gamma0, double hbar) {
  return classical_norm(traj.times, traj.Gamma, gamma0, hbar);
}

// Zero-point offset of <Gamma> in a coherent state for the oscillator families.
inline double oscillator_gamma0(const HamiltonianSpec& spec) {
  switch (spec.damping.kind) {
    case DampingKind::proportional_to_H0: {
      const double wp = spec.frame_omega();
      return 0.25 * spec.damping.k * spec.hbar * (wp + spec.omega * spec.omega / wp);  // hbar gamma / 2 at w' = w
    }
    case DampingKind::kinetic_only: return 0.25 * spec.damping.k * spec.hbar * spec.frame_omega();
    case DampingKind::none: return 0.0;
  }
  return 0.0;
}

}  // namespace nhcl
