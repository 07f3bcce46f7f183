#pragma once

// Fixed points of the nonlinear non-Hermitian Bloch equations on the sphere |s| = 1/2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "nhcl/classical.hpp"

namespace nhcl {

enum class FixedPointKind { sink, source, saddle, center, degenerate };

inline const char* to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::sink: return "sink";
    case FixedPointKind::source: return "source";
    case FixedPointKind::saddle: return "saddle";
    case FixedPointKind::center: return "center";
    case FixedPointKind::degenerate: return "degenerate";
  }
  return "?";
}

struct FixedPoint {
  Eigen::Vector3d s;
  FixedPointKind kind = FixedPointKind::degenerate;
  std::complex<double> lambda1, lambda2;  // tangent-plane Jacobian eigenvalues
};

inline Eigen::Matrix3d bloch_jacobian(double eps, double v, double g, double gamma, const Eigen::Vector3d& s) {
  const double sx = s(0), sy = s(1), sz = s(2);
  Eigen::Matrix3d j;
  j << 4 * gamma * sz, -2 * eps - 4 * g * sz, -4 * g * sy + 4 * gamma * sx,
      2 * eps + 4 * g * sz, 4 * gamma * sz, 4 * g * sx - 2 * v + 4 * gamma * sy,
      0.0, 2 * v, 8 * gamma * sz;
  return j;
}

// Orthonormal basis of the plane orthogonal to s, as columns.
inline Eigen::Matrix<double, 3, 2> tangent_basis(const Eigen::Vector3d& s) {
  const Eigen::Vector3d n = s.normalized();
  const Eigen::Vector3d a = std::abs(n(0)) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = (a - n * n.dot(a)).normalized();
  Eigen::Matrix<double, 3, 2> b;
  b.col(0) = e1;
  b.col(1) = n.cross(e1);
  return b;
}

inline FixedPoint classify_fixed_point(double eps, double v, double g, double gamma, const Eigen::Vector3d& s,
                                       double tol = 1e-9) {
  const Eigen::Matrix<double, 3, 2> b = tangent_basis(s);
  const Eigen::Matrix2d jt = b.transpose() * bloch_jacobian(eps, v, g, gamma, s) * b;
  Eigen::EigenSolver<Eigen::Matrix2d> es(jt, false);
  FixedPoint fp{s, FixedPointKind::degenerate, es.eigenvalues()(0), es.eigenvalues()(1)};
  const double r1 = fp.lambda1.real(), r2 = fp.lambda2.real();
  if (r1 < -tol && r2 < -tol) fp.kind = FixedPointKind::sink;
  else if (r1 > tol && r2 > tol) fp.kind = FixedPointKind::source;
  else if ((r1 < -tol && r2 > tol) || (r1 > tol && r2 < -tol)) fp.kind = FixedPointKind::saddle;
  else if (std::abs(r1) <= tol && std::abs(r2) <= tol) fp.kind = FixedPointKind::center;
  return fp;
}

// Points on the Fibonacci lattice of the radius-1/2 sphere.
inline std::vector<Eigen::Vector3d> fibonacci_sphere(int n) {
  std::vector<Eigen::Vector3d> pts;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(1.0 - z * z);
    pts.emplace_back(0.5 * r * std::cos(golden * i), 0.5 * r * std::sin(golden * i), 0.5 * z);
  }
  return pts;
}

// Damped Gauss-Newton on [f(s); s.s - 1/4] from each seed; roots closer than
// dedup are merged. No converged seed gives an empty list.
inline std::vector<FixedPoint> fixed_points(double eps, double v, double g, double gamma, int seeds = 64,
                                            double residual_tol = 1e-12, double dedup = 1e-6) {
  if (!std::isfinite(eps) || !std::isfinite(v) || !std::isfinite(g) || !std::isfinite(gamma))
    throw error(errc::invalid_parameter, "fixed point parameters must be finite");
  auto residual = [&](const Eigen::Vector3d& s) {
    Eigen::Vector4d r;
    r.head<3>() = bloch_rhs(eps, v, g, gamma, s);
    r(3) = s.squaredNorm() - 0.25;
    return r;
  };

  std::vector<FixedPoint> found;
  for (const Eigen::Vector3d& seed : fibonacci_sphere(seeds)) {
    Eigen::Vector3d s = seed;
    Eigen::Vector4d r = residual(s);
    bool ok = false;
    for (int it = 0; it < 200; ++it) {
      if (r.norm() < residual_tol) {
        ok = true;
        break;
      }
      Eigen::Matrix<double, 4, 3> j;
      j.topRows<3>() = bloch_jacobian(eps, v, g, gamma, s);
      j.row(3) = 2.0 * s.transpose();
      const Eigen::Vector3d step = j.colPivHouseholderQr().solve(-r);
      double lambda = 1.0;
      bool improved = false;
      for (int ls = 0; ls < 30; ++ls, lambda *= 0.5) {
        const Eigen::Vector3d trial = s + lambda * step;
        const Eigen::Vector4d rt = residual(trial);
        if (rt.norm() < r.norm()) {
          s = trial;
          r = rt;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (!ok) continue;
    s *= 0.5 / s.norm();
    if (bloch_rhs(eps, v, g, gamma, s).norm() > 10 * residual_tol) continue;
    const bool dup = std::any_of(found.begin(), found.end(), [&](const FixedPoint& f) { return (f.s - s).norm() < dedup; });
    if (!dup) found.push_back(classify_fixed_point(eps, v, g, gamma, s));
  }
  std::sort(found.begin(), found.end(), [](const FixedPoint& a, const FixedPoint& b) {
    if (a.s(2) != b.s(2)) return a.s(2) < b.s(2);
    if (a.s(0) != b.s(0)) return a.s(0) < b.s(0);
    return a.s(1) < b.s(1);
  });
  return found;
}

}  // namespace nhcl
