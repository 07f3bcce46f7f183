#pragma once

// One-period propagator of a periodically driven non-Hermitian Hamiltonian and
// its quasienergies, tracked by continuity in the drive amplitude.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nhcl/quantum.hpp"
#include "nhcl/spectral.hpp"

namespace nhcl {

// U(T) with T = 2 pi / Omega, obtained by propagating the identity.
inline Operator monodromy(const HamiltonianSpec& spec, std::size_t dim, double tol = 1e-10) {
  if (!spec.drive || !(spec.drive->Omega > 0))
    throw error(errc::spec_error, "monodromy needs a periodic drive with Omega > 0");
  const Generator gen(spec, dim);
  const std::array<double, 2> grid{0.0, spec.drive->period()};
  Operator u;
  detail::propagate_linear<Operator>(gen, identity(dim), grid, tol, Backend::automatic,
                                     [&](std::size_t k, double, const Operator& y) {
                                       if (k == 1) u = y;
                                     });
  return u;
}

struct FloquetLevel {
  int n = 0;          // index in the undriven ladder, ascending real energy
  cplx epsilon;       // quasienergy, Re unfolded along the ladder
  cplx multiplier;    // eigenvalue of U(T), exp(-i epsilon T / hbar)
};

struct FloquetResult {
  std::vector<FloquetLevel> levels;
  std::vector<std::string> warnings;
};

namespace detail {

// Distance between quasienergies with the real part compared modulo hbar Omega.
inline double quasi_distance(cplx a, cplx b, double zone) {
  double dr = std::fmod(std::abs(a.real() - b.real()), zone);
  dr = std::min(dr, zone - dr);
  return std::hypot(dr, a.imag() - b.imag());
}

}  // namespace detail

// Quasienergies eps = i hbar log(lambda) / T for the multipliers lambda that
// are resolvable (|lambda| > resolve * max |lambda|). Levels are anchored to the
// undriven spectrum and followed through f0 scaled by 0, 1/2 and 1.
inline FloquetResult monodromy_quasienergies(const HamiltonianSpec& spec, std::size_t dim, double tol = 1e-10,
                                             double resolve = 1e-8) {
  spec.validate();
  if (!spec.drive || !(spec.drive->Omega > 0))
    throw error(errc::spec_error, "quasienergies need a periodic drive with Omega > 0");
  const double hbar = spec.action();
  const double T = spec.drive->period();
  const double zone = hbar * spec.drive->Omega;
  const HamiltonianParts parts = hamiltonian_parts(spec, dim);
  const bool damped = max_abs(parts.Gamma) > 0.0;

  // Undriven ladder, ascending real energy.
  const SpectralData sd = spectral_decomposition(parts.H - I * parts.Gamma);
  std::vector<cplx> ladder(sd.eigenvalues.data(), sd.eigenvalues.data() + sd.eigenvalues.size());
  std::stable_sort(ladder.begin(), ladder.end(), [](cplx a, cplx b) { return a.real() < b.real(); });

  FloquetResult out;
  std::vector<cplx> tracked = ladder;
  std::vector<cplx> multipliers(ladder.size());
  std::vector<bool> alive(ladder.size(), true);

  for (double scale : {0.0, 0.5, 1.0}) {
    HamiltonianSpec s = spec;
    s.drive->f0 = spec.drive->f0 * scale;
    const Operator u = monodromy(s, dim, tol);
    Eigen::ComplexEigenSolver<Operator> es(u, false);
    if (es.info() != Eigen::Success) throw error(errc::consistency, "monodromy eigensolver failed");
    const CVector& lam = es.eigenvalues();
    double lam_max = 0.0;
    for (Eigen::Index k = 0; k < lam.size(); ++k) lam_max = std::max(lam_max, std::abs(lam(k)));

    std::vector<cplx> eps;
    std::vector<cplx> lams;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
      if (damped && std::abs(lam(k)) >= 1.0)
        throw error(errc::consistency, "Floquet multiplier with |lambda| >= 1 in a damped system");
      if (std::abs(lam(k)) > resolve * lam_max) {
        lams.push_back(lam(k));
        eps.push_back(I * hbar * std::log(lam(k)) / T);
      }
    }
    if (scale == 1.0) {
      for (std::size_t i = 0; i < lams.size(); ++i)
        for (std::size_t j = i + 1; j < lams.size(); ++j)
          if (std::abs(lams[i] - lams[j]) < 1e-10)
            out.warnings.push_back("near-degenerate Floquet multipliers " + std::to_string(std::abs(lams[i])));
    }

    // Most stable levels pick first; each multiplier is used once.
    std::vector<std::size_t> order(tracked.size());
    for (std::size_t n = 0; n < order.size(); ++n) order[n] = n;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return tracked[a].imag() > tracked[b].imag(); });
    std::vector<bool> used(eps.size(), false);
    for (std::size_t n : order) {
      if (!alive[n]) continue;
      double best = INFINITY;
      std::size_t arg = eps.size();
      for (std::size_t j = 0; j < eps.size(); ++j) {
        if (used[j]) continue;
        const double d = detail::quasi_distance(eps[j], tracked[n], zone);
        if (d < best) best = d, arg = j;
      }
      if (arg == eps.size() || best > 0.25 * zone) {
        alive[n] = false;
        continue;
      }
      used[arg] = true;
      const double shift = std::round((tracked[n].real() - eps[arg].real()) / zone);
      tracked[n] = eps[arg] + shift * zone;
      multipliers[n] = lams[arg];
    }
  }

  for (std::size_t n = 0; n < tracked.size(); ++n)
    if (alive[n]) out.levels.push_back({static_cast<int>(n), tracked[n], multipliers[n]});
  return out;
}

}  // namespace nhcl
