#pragma once

// Symplectic and metric structures on the plane and the Bloch sphere.
//
// Two-dimensional charts list coordinates as (q, p); the one exception is the
// raw sphere chart used by sphere_metric/sphere_symplectic, which follows the
// (p, q) order of its usual presentation.

#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "nhcl/error.hpp"

namespace nhcl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Chart { flat_qp, bloch_cartesian, bloch_canonical };

inline const char* to_string(Chart c) {
  switch (c) {
    case Chart::flat_qp: return "flat_qp";
    case Chart::bloch_cartesian: return "bloch_cartesian";
    case Chart::bloch_canonical: return "bloch_canonical";
  }
  return "?";
}

inline constexpr double kPoleMargin = 1e-8;

struct PhasePoint {
  Chart chart = Chart::flat_qp;
  Vec coords;

  static PhasePoint flat(double q, double p) { return {Chart::flat_qp, Vec{{q, p}}}; }
  static PhasePoint bloch(double sx, double sy, double sz) { return {Chart::bloch_cartesian, Vec{{sx, sy, sz}}}; }
  static PhasePoint canonical(double q, double p) { return {Chart::bloch_canonical, Vec{{q, p}}}; }

  void validate() const {
    const Eigen::Index want = chart == Chart::bloch_cartesian ? 3 : 2;
    if (coords.size() != want) throw error(errc::invalid_dimension, std::string("wrong coordinate count for ") + to_string(chart));
    if (!coords.allFinite()) throw error(errc::invalid_parameter, "non-finite phase point");
    if (chart == Chart::bloch_cartesian && std::abs(coords.squaredNorm() - 0.25) > 1e-10)
      throw error(errc::invalid_parameter, "Bloch vector must have length 1/2");
    if (chart == Chart::bloch_canonical && std::abs(coords(1)) > 1.0)
      throw error(errc::chart_singularity, "canonical Bloch chart needs |p| <= 1");
  }
};

// Standard symplectic matrix [[0,-1],[1,0]] in (q, p) order.
inline Mat standard_symplectic() { return Mat{{0.0, -1.0}, {1.0, 0.0}}; }

struct KahlerResult {
  bool compatible = false;
  double residual = 0.0;
};

// Residual of omega^{-1} = (g^{-1} omega g^{-1})^T in the max norm.
inline KahlerResult kahler_check(const Mat& omega, const Mat& g, double tol = 1e-10) {
  if (omega.rows() != omega.cols() || g.rows() != g.cols() || omega.rows() != g.rows() || omega.rows() == 0)
    throw error(errc::invalid_dimension, "omega and g must be square of equal size");
  Eigen::FullPivLU<Mat> lu_w(omega);
  if (!lu_w.isInvertible()) throw error(errc::singular_structure, "omega is singular");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0.0) || (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw error(errc::singular_structure, "g must be symmetric positive definite");
  const Mat g_inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  const Mat lhs = lu_w.inverse();
  const Mat rhs = (g_inv * omega * g_inv).transpose();
  const double res = (lhs - rhs).cwiseAbs().maxCoeff();
  return {res < tol, res};
}

enum class SphereChart { theta_phi, p_q };

// Round-sphere metric of radius R. theta_phi takes (theta, phi); p_q takes
// (p, q) with p = cos(theta), q = phi/2 and returns the matrix in (p, q) order.
inline Mat sphere_metric(double R, SphereChart chart, double a, double b) {
  if (!(R > 0)) throw error(errc::invalid_parameter, "sphere radius must be positive");
  (void)b;
  const double r2 = R * R;
  if (chart == SphereChart::theta_phi) {
    const double s = std::sin(a);
    if (std::abs(s) < kPoleMargin) throw error(errc::chart_singularity, "theta at a pole");
    return Mat{{r2, 0.0}, {0.0, r2 * s * s}};
  }
  const double w = 1.0 - a * a;
  if (!(w > kPoleMargin)) throw error(errc::chart_singularity, "|p| too close to 1");
  return Mat{{r2 / w, 0.0}, {0.0, 4.0 * r2 * w}};
}

// Area form of the radius-R sphere in the (p, q) chart, 2 R^2 [[0,-1],[1,0]];
// this is the constant omega compatible with sphere_metric(R, p_q, .).
inline Mat sphere_symplectic(double R) {
  if (!(R > 0)) throw error(errc::invalid_parameter, "sphere radius must be positive");
  return 2.0 * R * R * standard_symplectic();
}

struct CanonicalPair {
  Mat Omega;
  Mat G;
  double kappa = 1.0;
};

enum class RawOrder { qp, pq };

// Rescales a compatible (omega, g) by kappa so that kappa * omega is the
// standard matrix, then returns G = kappa * g in (q, p) order.
inline CanonicalPair canonical_pair_from_raw(const Mat& omega, const Mat& g, RawOrder order = RawOrder::qp) {
  if (omega.rows() != 2 || omega.cols() != 2)
    throw error(errc::unsupported_chart, "canonical pair is defined for two-dimensional charts");
  const KahlerResult k = kahler_check(omega, g);
  if (!k.compatible)
    throw error(errc::incompatible_structure, "omega and g fail compatibility, residual " + std::to_string(k.residual));
  const Mat s = standard_symplectic();
  const double w = omega(1, 0);
  if (!(w > 0.0) || (omega - w * s).cwiseAbs().maxCoeff() > 1e-12 * std::abs(w))
    throw error(errc::unsupported_chart, "omega is not a positive multiple of the standard form");
  const double kappa = 1.0 / w;
  Mat G = kappa * g;
  if (order == RawOrder::pq) {
    Mat swapped(2, 2);
    swapped << G(1, 1), G(1, 0), G(0, 1), G(0, 0);
    G = swapped;
  }
  return {kappa * omega, G, kappa};
}

// Kahler metric of the canonical Bloch chart in (q, p) order.
inline Mat bloch_canonical_metric(double p) {
  const double w = 1.0 - p * p;
  if (!(w > kPoleMargin)) throw error(errc::chart_singularity, "|p| too close to 1");
  return Mat{{2.0 * w, 0.0}, {0.0, 1.0 / (2.0 * w)}};
}

inline PhasePoint chart_transform(const PhasePoint& x, Chart target) {
  x.validate();
  if (x.chart == target) return x;
  if (x.chart == Chart::bloch_canonical && target == Chart::bloch_cartesian) {
    const double q = x.coords(0), p = x.coords(1);
    const double r = 0.5 * std::sqrt(std::max(0.0, 1.0 - p * p));
    return PhasePoint::bloch(r * std::cos(2.0 * q), r * std::sin(2.0 * q), 0.5 * p);
  }
  if (x.chart == Chart::bloch_cartesian && target == Chart::bloch_canonical) {
    const double sx = x.coords(0), sy = x.coords(1), sz = x.coords(2);
    if (std::hypot(sx, sy) <= 1e-12) throw error(errc::chart_singularity, "azimuth undefined at a pole");
    return PhasePoint::canonical(0.5 * std::atan2(sy, sx), sz / x.coords.norm());
  }
  throw error(errc::unsupported_chart, std::string("no transform from ") + to_string(x.chart) + " to " +
                                           to_string(target));
}

// Chart plus the position-dependent structures of the flow Omega^{-1} grad H - G^{-1} grad Gamma.
struct PhaseGeometry {
  Chart chart = Chart::flat_qp;
  std::function<Mat(const Vec&)> Omega;
  std::function<Mat(const Vec&)> G;
  double kappa = 1.0;

  // Plane in physical (q, p); G = diag(m w', 1/(m w')) comes from the coherent-state
  // frame of frequency w' and reduces to the identity in scaled coordinates.
  static PhaseGeometry flat(double m_omega = 1.0) {
    if (!(m_omega > 0)) throw error(errc::invalid_parameter, "m * omega must be positive");
    return {Chart::flat_qp, [](const Vec&) { return standard_symplectic(); },
            [m_omega](const Vec&) { return Mat{{m_omega, 0.0}, {0.0, 1.0 / m_omega}}; }, 1.0};
  }

  // Canonical Bloch chart, built from the unit-sphere raw pair.
  static PhaseGeometry bloch_canonical() {
    auto pair_at = [](double p) {
      return canonical_pair_from_raw(sphere_symplectic(1.0), sphere_metric(1.0, SphereChart::p_q, p, 0.0),
                                     RawOrder::pq);
    };
    return {Chart::bloch_canonical, [](const Vec&) { return standard_symplectic(); },
            [pair_at](const Vec& x) { return pair_at(x(1)).G; }, pair_at(0.0).kappa};
  }

  // Embedded sphere; the flow is evaluated by the Cartesian formula in flow_rhs.
  static PhaseGeometry bloch_cartesian() { return {Chart::bloch_cartesian, {}, {}, 1.0}; }
};

}  // namespace nhcl
