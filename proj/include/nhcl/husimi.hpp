#pragma once

// Husimi projections averaged over a time window, and ridge extraction.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nhcl/coherent.hpp"
#include "nhcl/quantum.hpp"

namespace nhcl {

struct GridAxis {
  double lo = -3.0;
  double hi = 3.0;
  int n = 201;

  double step() const { return n > 1 ? (hi - lo) / (n - 1) : 0.0; }
  double at(int i) const { return lo + step() * i; }
  void validate(const char* name) const {
    if (!(n >= 2) || !(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
      throw error(errc::invalid_parameter, std::string("bad grid axis ") + name);
  }
};

struct HusimiField {
  GridAxis q_axis;
  GridAxis p_axis;
  Eigen::MatrixXd value;  // value(i, j) at (q_i, p_j)
  std::size_t snapshots = 0;
  double centroid_q = 0.0;
  double centroid_p = 0.0;
  std::vector<std::pair<double, double>> ridge;  // one (q, p) per ray

  double cell() const { return std::max(q_axis.step(), p_axis.step()); }

  std::pair<double, double> peak() const {
    Eigen::Index i = 0, j = 0;
    value.maxCoeff(&i, &j);
    return {q_axis.at(static_cast<int>(i)), p_axis.at(static_cast<int>(j))};
  }

  // Bilinear interpolation; zero outside the grid.
  double sample(double q, double p) const {
    const double x = (q - q_axis.lo) / q_axis.step();
    const double y = (p - p_axis.lo) / p_axis.step();
    if (x < 0 || y < 0 || x > q_axis.n - 1 || y > p_axis.n - 1) return 0.0;
    const int i = std::min(static_cast<int>(x), q_axis.n - 2);
    const int j = std::min(static_cast<int>(y), p_axis.n - 2);
    const double fx = x - i, fy = y - j;
    return (1 - fx) * (1 - fy) * value(i, j) + fx * (1 - fy) * value(i + 1, j) + (1 - fx) * fy * value(i, j + 1) +
           fx * fy * value(i + 1, j + 1);
  }
};

struct HusimiOptions {
  bool normalize_snapshots = true;  // divide each |<alpha|psi>|^2 by <psi|psi>
  int rays = 360;
};

// Centroid of the field, then along each ray from it the position of the maximum.
inline void extract_ridge(HusimiField& f, int rays) {
  double total = 0.0, mq = 0.0, mp = 0.0;
  for (int i = 0; i < f.q_axis.n; ++i)
    for (int j = 0; j < f.p_axis.n; ++j) {
      const double v = f.value(i, j);
      total += v;
      mq += v * f.q_axis.at(i);
      mp += v * f.p_axis.at(j);
    }
  f.ridge.clear();
  if (!(total > 0)) return;
  f.centroid_q = mq / total;
  f.centroid_p = mp / total;
  const double dr = 0.25 * std::min(f.q_axis.step(), f.p_axis.step());
  for (int k = 0; k < rays; ++k) {
    const double phi = 2.0 * M_PI * k / rays;
    const double c = std::cos(phi), s = std::sin(phi);
    double best = -1.0, best_r = 0.0;
    for (double r = 0.0;; r += dr) {
      const double q = f.centroid_q + r * c, p = f.centroid_p + r * s;
      if (q < f.q_axis.lo || q > f.q_axis.hi || p < f.p_axis.lo || p > f.p_axis.hi) break;
      const double v = f.sample(q, p);
      if (v > best) best = v, best_r = r;
    }
    f.ridge.emplace_back(f.centroid_q + best_r * c, f.centroid_p + best_r * s);
  }
}

// Average of |<alpha(q,p)|psi(t)>|^2 over the trajectory samples with t in
// [t_begin, t_end); half-open so a full period is not counted twice.
inline HusimiField husimi_grid(const QuantumTrajectory& traj, const Frame& frame, const GridAxis& q_axis,
                               const GridAxis& p_axis, double t_begin, double t_end, const HusimiOptions& opt = {}) {
  frame.validate();
  q_axis.validate("q");
  p_axis.validate("p");
  HusimiField f{q_axis, p_axis, Eigen::MatrixXd::Zero(q_axis.n, p_axis.n)};
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const double slack = 1e-9 * std::max(1.0, std::abs(t));
    if (t < t_begin - slack || t >= t_end - slack) continue;
    const QuantumState& st = traj.states[k];
    const double w = opt.normalize_snapshots ? 1.0 / st.norm_sq() : 1.0;
    for (int i = 0; i < q_axis.n; ++i)
      for (int j = 0; j < p_axis.n; ++j)
        f.value(i, j) += w * std::norm(coherent_overlap(st.amplitudes(), frame.alpha(q_axis.at(i), p_axis.at(j))));
    ++f.snapshots;
  }
  if (f.snapshots == 0) throw error(errc::invalid_window, "no trajectory samples inside the averaging window");
  f.value /= static_cast<double>(f.snapshots);
  extract_ridge(f, opt.rays);
  return f;
}

}  // namespace nhcl
