#pragma once

// Embedded Dormand-Prince 5(4) stepper over any Eigen dense type.
//
// The integrator hits every requested output time exactly (steps are clipped),
// so callers get values on their own grid without interpolation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nhcl/error.hpp"

namespace nhcl::ode {

struct Options {
  double tol = 1e-10;
  double initial_step = 0.0;  // 0: pick from the grid spacing
  double max_step = 0.0;      // 0: unbounded
  std::size_t max_steps = 50'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
}  // namespace detail

// Integrates y' = rhs(t, y) from grid.front() and calls observe(k, t_k, y) at
// every grid point (including the first).
//
// error_ratio(err, y_old, y_new) returns the local error estimate divided by the
// admissible error; a step is accepted when it is <= 1.
// after_step(t, y) may modify y after each accepted step (e.g. projection).
template <class State, class Rhs, class ErrorRatio, class Observe>
Stats integrate(Rhs&& rhs, State y, std::span<const double> grid, const Options& opt,
                ErrorRatio&& error_ratio, Observe&& observe,
                const std::function<void(double, State&)>& after_step = {}) {
  using namespace detail;
  Stats stats;
  if (grid.empty()) return stats;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw error(errc::invalid_parameter, "time grid must be increasing");
  if (!(opt.tol > 0)) throw error(errc::invalid_parameter, "tolerance must be positive");

  double t = grid.front();
  observe(std::size_t{0}, t, static_cast<const State&>(y));
  if (grid.size() == 1) return stats;

  double h = opt.initial_step > 0 ? opt.initial_step
                                  : std::min(grid[1] - grid[0], 1e-2 * (grid.back() - grid.front()));
  State k1 = rhs(t, y);
  State k2, k3, k4, k5, k6, k7, y_new, err;

  for (std::size_t next = 1; next < grid.size(); ++next) {
    const double target = grid[next];
    while (t < target) {
      if (opt.max_step > 0) h = std::min(h, opt.max_step);
      double hs = h;
      bool last = false;
      if (t + hs >= target || target - (t + hs) < 1e-12 * std::max(1.0, std::abs(target))) {
        hs = target - t;
        last = true;
      }
      if (hs < 1e-13 * std::max(1.0, std::abs(t)))
        throw error(errc::stiffness, "step size underflow at t=" + std::to_string(t));

      k2 = rhs(t + c2 * hs, State(y + hs * (a21 * k1)));
      k3 = rhs(t + c3 * hs, State(y + hs * (a31 * k1 + a32 * k2)));
      k4 = rhs(t + c4 * hs, State(y + hs * (a41 * k1 + a42 * k2 + a43 * k3)));
      k5 = rhs(t + c5 * hs, State(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
      k6 = rhs(t + hs, State(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
      y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = rhs(t + hs, y_new);
      err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double ratio = error_ratio(static_cast<const State&>(err), static_cast<const State&>(y),
                                       static_cast<const State&>(y_new));
      if (!std::isfinite(ratio)) throw error(errc::stiffness, "non-finite error estimate");
      const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);

      if (ratio <= 1.0) {
        t = last ? target : t + hs;
        y = std::move(y_new);
        if (after_step) {
          after_step(t, y);
          k1 = rhs(t, y);
        } else {
          k1 = std::move(k7);
        }
        ++stats.accepted;
        // A step shortened to land on the grid says nothing about the natural size.
        if (!(last && hs < h)) h = hs * factor;
      } else {
        ++stats.rejected;
        h = hs * std::max(factor, 0.1);
      }
      if (stats.accepted + stats.rejected > opt.max_steps)
        throw error(errc::stiffness, "step budget exhausted at t=" + std::to_string(t));
    }
    observe(next, t, static_cast<const State&>(y));
  }
  return stats;
}

}  // namespace nhcl::ode
