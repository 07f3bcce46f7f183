#pragma once

// Finite matrix representations of ladder, position/momentum and angular
// momentum operators, and assembly of H - i Gamma from a declarative spec.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "nhcl/linalg.hpp"

namespace nhcl {

struct LadderPair {
  Operator a;
  Operator a_dagger;
};

struct PositionMomentum {
  Operator q;
  Operator p;
};

struct AngularMomentum {
  Operator Lx;
  Operator Ly;
  Operator Lz;
};

inline LadderPair ladder_matrices(std::size_t dim) {
  if (dim < 2) throw error(errc::invalid_dimension, "ladder basis needs dim >= 2");
  const auto n = static_cast<Eigen::Index>(dim);
  Operator a = Operator::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return {a, a.adjoint()};
}

inline PositionMomentum position_momentum(std::size_t dim, double m, double omega, double hbar) {
  if (!(m > 0) || !(omega > 0) || !(hbar > 0))
    throw error(errc::invalid_parameter, "m, omega and hbar must be positive");
  const auto [a, ad] = ladder_matrices(dim);
  const double q_scale = std::sqrt(hbar / (2.0 * m * omega));
  const double p_scale = std::sqrt(m * hbar * omega / 2.0);
  return {q_scale * (a + ad), (I * p_scale) * (ad - a)};
}

// Number of basis states for angular momentum L, validating that 2L is a positive integer.
inline std::size_t spin_dimension(double L) {
  const double two_l = 2.0 * L;
  const double rounded = std::round(two_l);
  if (!(rounded >= 1.0) || std::abs(two_l - rounded) > 1e-12)
    throw error(errc::invalid_parameter, "2L must be a positive integer, got L=" + std::to_string(L));
  return static_cast<std::size_t>(rounded) + 1;
}

// Basis ordered m = L, L-1, ..., -L (hbar = 1).
inline AngularMomentum angular_momentum_matrices(double L) {
  const std::size_t dim = spin_dimension(L);
  const auto n = static_cast<Eigen::Index>(dim);
  const double l = 0.5 * static_cast<double>(dim - 1);
  Operator lz = Operator::Zero(n, n);
  Operator raise = Operator::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mk = l - static_cast<double>(k);
    lz(k, k) = mk;
    if (k > 0) raise(k - 1, k) = std::sqrt(l * (l + 1.0) - mk * (mk + 1.0));
  }
  const Operator lower = raise.adjoint();
  return {0.5 * (raise + lower), (-0.5 * I) * (raise - lower), lz};
}

enum class Family { harmonic, driven_harmonic, anharmonic, spin };

enum class DampingKind { proportional_to_H0, kinetic_only, none };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::harmonic: return "harmonic";
    case Family::driven_harmonic: return "driven_harmonic";
    case Family::anharmonic: return "anharmonic";
    case Family::spin: return "spin";
  }
  return "?";
}

struct DampingSpec {
  DampingKind kind = DampingKind::proportional_to_H0;
  double k = 0.0;                     // gamma = k * omega
  std::optional<double> omega_prime;  // coherent-state frame frequency, defaults to omega
};

// f_t = f0 cos(Omega t), real.
struct Drive {
  double f0 = 0.0;
  double Omega = 1.0;

  double at(double t) const { return f0 * std::cos(Omega * t); }
  double period() const { return 2.0 * M_PI / Omega; }
};

struct SpinParams {
  double epsilon = 0.0;
  double v = 1.0;
  double c = 0.0;
  double gamma = 0.0;
  double L = 0.5;
};

struct HamiltonianSpec {
  Family family = Family::harmonic;
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  DampingSpec damping;
  double beta = 0.0;
  std::optional<Drive> drive;
  SpinParams spin;

  bool is_spin() const { return family == Family::spin; }
  bool time_dependent() const { return drive.has_value() && drive->f0 != 0.0; }
  double gamma() const { return damping.k * omega; }
  double frame_omega() const { return damping.omega_prime.value_or(omega); }
  double action() const { return is_spin() ? 1.0 : hbar; }

  void validate() const {
    if (is_spin()) {
      spin_dimension(spin.L);
      if (!(spin.gamma >= 0)) throw error(errc::invalid_parameter, "spin gamma must be >= 0");
      if (!std::isfinite(spin.epsilon) || !std::isfinite(spin.v) || !std::isfinite(spin.c))
        throw error(errc::invalid_parameter, "spin parameters must be finite");
      if (drive) throw error(errc::spec_error, "spin family does not take a drive");
      return;
    }
    if (!(m > 0)) throw error(errc::invalid_parameter, "m must be positive");
    if (!(omega > 0)) throw error(errc::invalid_parameter, "omega must be positive");
    if (!(hbar > 0)) throw error(errc::invalid_parameter, "hbar must be positive");
    if (!(damping.k >= 0)) throw error(errc::invalid_parameter, "damping ratio k must be >= 0");
    if (damping.omega_prime && !(*damping.omega_prime > 0))
      throw error(errc::invalid_parameter, "omega_prime must be positive");
    if (!std::isfinite(beta)) throw error(errc::invalid_parameter, "beta must be finite");
    if (family != Family::anharmonic && beta != 0.0)
      throw error(errc::spec_error, "beta is only meaningful for the anharmonic family");
    if (family == Family::driven_harmonic && !drive)
      throw error(errc::spec_error, "driven_harmonic requires a drive");
    if (family == Family::harmonic && drive)
      throw error(errc::spec_error, "harmonic family has no drive; use driven_harmonic");
    if (drive && (!std::isfinite(drive->f0) || !(drive->Omega > 0)))
      throw error(errc::invalid_parameter, "drive needs finite f0 and Omega > 0");
  }
};

// Static parts of the model plus the operator multiplying f_t, so the
// time-dependent Hamiltonian is H(t) = H + f_t * drive_op.
struct HamiltonianParts {
  Operator H;
  Operator Gamma;
  Operator drive_op;  // empty when undriven

  Operator H_at(double t, const std::optional<Drive>& drive) const {
    if (!drive || drive_op.size() == 0) return H;
    return H + drive->at(t) * drive_op;
  }
};

inline HamiltonianParts hamiltonian_parts(const HamiltonianSpec& spec, std::size_t dim) {
  spec.validate();
  HamiltonianParts out;
  if (spec.is_spin()) {
    const std::size_t expected = spin_dimension(spec.spin.L);
    if (dim != expected)
      throw error(errc::spec_error, "spin family needs dim = 2L+1 = " + std::to_string(expected));
    const auto [lx, ly, lz] = angular_momentum_matrices(spec.spin.L);
    (void)ly;
    const auto& s = spec.spin;
    out.H = 2.0 * s.epsilon * lz + 2.0 * s.v * lx + 2.0 * s.c * (lz * lz);
    out.Gamma = 2.0 * s.gamma * (lz + s.L * identity(dim));
    return out;
  }
  if (dim < 2) throw error(errc::spec_error, "oscillator family needs dim >= 2");

  // Basis is the Fock basis of the coherent-state frame (omega_prime).
  const auto [q, p] = position_momentum(dim, spec.m, spec.frame_omega(), spec.hbar);
  const Operator p2 = p * p;
  const Operator q2 = q * q;
  const Operator h0 = p2 / (2.0 * spec.m) + (0.5 * spec.m * spec.omega * spec.omega) * q2;
  out.H = h0;
  if (spec.family == Family::anharmonic) out.H += (0.25 * spec.beta) * (q2 * q2);

  switch (spec.damping.kind) {
    case DampingKind::proportional_to_H0: out.Gamma = spec.damping.k * h0; break;
    case DampingKind::kinetic_only: out.Gamma = (spec.damping.k / (2.0 * spec.m)) * p2; break;
    case DampingKind::none: out.Gamma = Operator::Zero(q.rows(), q.cols()); break;
  }
  if (spec.drive) {
    const auto [a, ad] = ladder_matrices(dim);
    out.drive_op = spec.hbar * (a + ad);
  }
  // Products of Hermitian matrices are Hermitian only up to rounding.
  out.H = hermitian_part(out.H);
  out.Gamma = hermitian_part(out.Gamma);
  return out;
}

struct HamiltonianPair {
  Operator H;
  Operator Gamma;

  Operator total() const { return H - I * Gamma; }
};

inline HamiltonianPair build_hamiltonian(const HamiltonianSpec& spec, std::size_t dim, double t = 0.0) {
  HamiltonianParts parts = hamiltonian_parts(spec, dim);
  return {parts.H_at(t, spec.drive), parts.Gamma};
}

}  // namespace nhcl
