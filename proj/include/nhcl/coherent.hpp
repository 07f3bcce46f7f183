#pragma once

// Glauber and SU(2) coherent states, Bloch expectations and the Husimi kernel.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "nhcl/operators.hpp"
#include "nhcl/state.hpp"

namespace nhcl {

// Maps phase-space points to coherent labels: alpha = (m w q + i p) / sqrt(2 m hbar w).
struct Frame {
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  void validate() const {
    if (!(m > 0) || !(omega > 0) || !(hbar > 0))
      throw error(errc::invalid_parameter, "frame parameters must be positive");
  }
  cplx alpha(double q, double p) const {
    return cplx(m * omega * q, p) / std::sqrt(2.0 * m * hbar * omega);
  }
  double q(cplx alpha) const { return std::sqrt(2.0 * hbar / (m * omega)) * alpha.real(); }
  double p(cplx alpha) const { return std::sqrt(2.0 * m * hbar * omega) * alpha.imag(); }
};

inline Frame frame_of(const HamiltonianSpec& spec) {
  return {spec.m, spec.frame_omega(), spec.hbar};
}

struct CoherentLabel {
  cplx alpha{0.0, 0.0};
  Frame frame;

  static CoherentLabel at(double q, double p, const Frame& frame) {
    frame.validate();
    return {frame.alpha(q, p), frame};
  }
};

// Population of a coherent state beyond the truncation: e^{-|a|^2} sum_{n>=dim} |a|^{2n}/n!.
inline double glauber_leakage(cplx alpha, std::size_t dim) {
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.0;
  // log of the first omitted Poisson weight, then sum the tail by ratio.
  double log_term = -x + static_cast<double>(dim) * std::log(x) - std::lgamma(static_cast<double>(dim) + 1.0);
  double term = std::exp(log_term);
  double tail = 0.0;
  for (std::size_t n = dim; n < dim + 100000; ++n) {
    tail += term;
    term *= x / static_cast<double>(n + 1);
    if (term < 1e-18 * tail && static_cast<double>(n + 1) > x) break;
  }
  return tail;
}

inline QuantumState glauber_state(const CoherentLabel& label, std::size_t dim,
                                  std::vector<std::string>* warnings = nullptr) {
  if (dim < 1) throw error(errc::invalid_dimension, "dim must be positive");
  label.frame.validate();
  CVector c(static_cast<Eigen::Index>(dim));
  c(0) = std::exp(-0.5 * std::norm(label.alpha));
  for (Eigen::Index n = 1; n < c.size(); ++n)
    c(n) = c(n - 1) * label.alpha / std::sqrt(static_cast<double>(n));
  if (warnings) {
    const double leak = glauber_leakage(label.alpha, dim);
    if (leak > 1e-12)
      warnings->push_back("coherent state truncation leakage " + std::to_string(leak) + " at dim " +
                          std::to_string(dim));
  }
  return QuantumState(std::move(c));
}

// exp(i theta (Lx sin phi - Ly cos phi)) |L, L>
inline QuantumState su2_state(double theta, double phi, double L) {
  if (!(theta >= 0.0 && theta <= M_PI) || !std::isfinite(phi))
    throw error(errc::invalid_parameter, "theta must lie in [0, pi]");
  const auto [lx, ly, lz] = angular_momentum_matrices(L);
  (void)lz;
  const Operator generator = std::sin(phi) * lx - std::cos(phi) * ly;
  CVector top = CVector::Zero(lx.rows());
  top(0) = 1.0;
  return QuantumState(expm_i_hermitian(generator, theta) * top);
}

using BlochVector = std::array<double, 3>;

// s_j = <L_j> / 2L for a normalized expectation.
inline BlochVector bloch_expectations(const QuantumState& state, double L) {
  const std::size_t dim = spin_dimension(L);
  if (state.dim() != dim) throw error(errc::invalid_dimension, "state dimension must be 2L+1");
  const auto [lx, ly, lz] = angular_momentum_matrices(L);
  const CVector& psi = state.amplitudes();
  const double scale = 1.0 / (2.0 * L * state.norm_sq());
  return {psi.dot(lx * psi).real() * scale, psi.dot(ly * psi).real() * scale,
          psi.dot(lz * psi).real() * scale};
}

// <alpha|psi> in the Fock basis, by a running product for (alpha*)^n / sqrt(n!).
inline cplx coherent_overlap(const CVector& psi, cplx alpha) {
  const cplx ac = std::conj(alpha);
  cplx weight = std::exp(-0.5 * std::norm(alpha));
  cplx sum = weight * psi(0);
  for (Eigen::Index n = 1; n < psi.size(); ++n) {
    weight *= ac / std::sqrt(static_cast<double>(n));
    sum += weight * psi(n);
  }
  return sum;
}

// Raw projection |<alpha|psi>|^2, not divided by <psi|psi>.
inline double husimi_overlap(const QuantumState& state, const CoherentLabel& label) {
  return std::norm(coherent_overlap(state.amplitudes(), label.alpha));
}

}  // namespace nhcl
