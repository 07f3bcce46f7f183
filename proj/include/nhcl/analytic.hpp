#pragma once

// Closed-form solutions for the damped and the driven damped harmonic oscillator.
//
// Driven model: H - i Gamma = hbar w~ (a^dag a + 1/2) + hbar f_t (a + a^dag),
// with w~ = omega - i gamma and f_t = f0 cos(Omega t).

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "nhcl/coherent.hpp"

namespace nhcl::analytic {

struct PhasePair {
  double q = 0.0;
  double p = 0.0;
};

// Solution of q'' + 2 gamma q' + (omega^2 + gamma^2) q = 0 with q(0) = q0 and
// p = m (q' + gamma q), so p(0) = p0.
inline PhasePair damped_ho_solution(double omega, double gamma, double m, double q0, double p0,
                                    double t) {
  if (!(gamma >= 0)) throw error(errc::invalid_parameter, "gamma must be >= 0");
  if (!(omega > 0) || !(m > 0)) throw error(errc::invalid_parameter, "omega and m must be positive");
  const double env = std::exp(-gamma * t);
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  return {env * (q0 * c + p0 / (m * omega) * s), env * (p0 * c - m * omega * q0 * s)};
}

struct DrivenHOParams {
  cplx omega_tilde{1.0, 0.0};
  double Omega = 1.0;
  double f0 = 0.0;
  double hbar = 1.0;

  static DrivenHOParams from(double omega, double gamma, double Omega, double f0, double hbar = 1.0) {
    return {cplx(omega, -gamma), Omega, f0, hbar};
  }

  cplx detuning() const { return omega_tilde * omega_tilde - Omega * Omega; }

  void validate() const {
    if (!(omega_tilde.imag() <= 0.0)) throw error(errc::invalid_parameter, "Im w~ must be <= 0");
    if (!(hbar > 0)) throw error(errc::invalid_parameter, "hbar must be positive");
    if (!std::isfinite(f0) || !std::isfinite(Omega))
      throw error(errc::invalid_parameter, "drive parameters must be finite");
    if (f0 != 0.0 && !(std::abs(detuning()) > 1e-12))
      throw error(errc::near_resonance, "|w~^2 - Omega^2| <= 1e-12");
  }
};

struct DrivenCoefficients {
  cplx A, B, C, D;
};

// Coefficients of the exact solution. They solve i D' = w~ (D+1), i B' = f (D+1),
// i C' = w~ C + f, i A' = f C with all four zero at t = 0.
inline DrivenCoefficients driven_coefficients(const DrivenHOParams& par, double t) {
  par.validate();
  const cplx w = par.omega_tilde;
  const double W = par.Omega;
  const cplx D = std::exp(-I * w * t) - 1.0;
  if (par.f0 == 0.0) return {0.0, 0.0, 0.0, D};

  const double f0 = par.f0;
  const cplx den = par.detuning();
  const cplx e_minus = std::exp(-I * (w - W) * t);
  const cplx e_plus = std::exp(-I * (w + W) * t);
  const cplx bracket_b = (w + W) * e_minus + (w - W) * e_plus - 2.0 * w;

  const cplx B = f0 / (2.0 * den) * bracket_b;
  const cplx C = -f0 / (2.0 * den) *
                 ((w - W) * std::exp(I * W * t) + (w + W) * std::exp(-I * W * t) -
                  2.0 * w * std::exp(-I * w * t));
  cplx A;
  if (W == 0.0) {
    // Static force: C = (f0/w)(e^{-iwt} - 1), A = -i f0 int C.
    A = -I * f0 * f0 / w * ((std::exp(-I * w * t) - 1.0) / (-I * w) - t);
  } else {
    A = f0 * f0 / (4.0 * den) *
        (2.0 * I * w * t +
         ((w - W) * std::exp(2.0 * I * W * t) - (w + W) * std::exp(-2.0 * I * W * t) + 2.0 * W) /
             (2.0 * W) +
         2.0 * w / den * bracket_b);
  }
  return {A, B, C, D};
}

inline cplx coherent_label(const DrivenHOParams& par, cplx alpha0, double t) {
  const DrivenCoefficients k = driven_coefficients(par, t);
  return k.C + (1.0 + k.D) * alpha0;
}

// Periodic attractor label: the long-time limit of C_t.
inline cplx limit_cycle_label(const DrivenHOParams& par, double t) {
  par.validate();
  const cplx w = par.omega_tilde;
  const double W = par.Omega;
  return -par.f0 / (2.0 * par.detuning()) *
         ((w - W) * std::exp(I * W * t) + (w + W) * std::exp(-I * W * t));
}

// n_t = exp(-gamma t - |alpha0|^2 (1 - e^{-2 gamma t})), for the proportionally damped oscillator.
inline double norm_formula(cplx alpha0, double gamma, double t) {
  if (!(gamma >= 0)) throw error(errc::invalid_parameter, "gamma must be >= 0");
  return std::exp(-gamma * t - std::norm(alpha0) * (1.0 - std::exp(-2.0 * gamma * t)));
}

struct LimitCycle {
  double Q = 0.0;      // signed amplitude, q(t) = Q cos(Omega t - delta)
  double delta = 0.0;
  bool phase_defined = true;
};

inline LimitCycle limit_cycle(double omega0_sq, double gamma, double Omega, double F0) {
  const double a = omega0_sq - Omega * Omega;
  const double b = 2.0 * gamma * Omega;
  const double den = std::hypot(a, b);
  if (!(den > 0)) throw error(errc::near_resonance, "undamped resonance: amplitude diverges");
  if (F0 == 0.0) return {0.0, 0.0, false};
  return {F0 / den, std::atan2(b, a), true};
}

// Force amplitude of q'' + 2 gamma q' + (omega^2 + gamma^2) q = F0 cos(Omega t) matching f0.
inline double force_amplitude(double f0, double m, double omega, double hbar) {
  return -std::sqrt(2.0 * hbar * omega / m) * f0;
}

inline cplx quasienergy(int n, const DrivenHOParams& par) {
  if (n < 0) throw error(errc::invalid_parameter, "quasienergy index must be >= 0");
  par.validate();
  const cplx shift = par.f0 == 0.0 ? cplx(0.0) : par.f0 * par.f0 / (2.0 * par.detuning());
  return par.hbar * par.omega_tilde * (static_cast<double>(n) + 0.5 - shift);
}

// exp(-i w~ t/2 + A + B alpha0 - |alpha0|^2/2 + |alpha_t|^2/2) |alpha_t>, unnormalized.
inline QuantumState exact_driven_state(const DrivenHOParams& par, cplx alpha0, double t, std::size_t dim,
                                       std::vector<std::string>* warnings = nullptr) {
  const DrivenCoefficients k = driven_coefficients(par, t);
  const cplx alpha_t = k.C + (1.0 + k.D) * alpha0;
  const cplx prefactor = std::exp(-0.5 * I * par.omega_tilde * t + k.A + k.B * alpha0 -
                                  0.5 * std::norm(alpha0) + 0.5 * std::norm(alpha_t));
  const QuantumState coherent = glauber_state(CoherentLabel{alpha_t, Frame{}}, dim, warnings);
  return QuantumState(prefactor * coherent.amplitudes(), t);
}

}  // namespace nhcl::analytic
