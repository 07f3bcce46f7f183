#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "nhcl/error.hpp"

namespace nhcl {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};

inline double max_abs(const Operator& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline void require_same_dim(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw error(errc::invalid_dimension, "operator dimensions do not agree");
}

inline Operator hermitian_part(const Operator& a) { return 0.5 * (a + a.adjoint()); }

// Returns B with a = hermitian_part(a) - i B, i.e. B = i (a - a^dag) / 2 (Hermitian).
inline Operator antihermitian_part(const Operator& a) { return 0.5 * I * (a - a.adjoint()); }

inline double antihermitian_defect(const Operator& a) { return 0.5 * max_abs(a - a.adjoint()); }

inline bool is_hermitian(const Operator& a, double tol = 1e-12) {
  return a.rows() == a.cols() && antihermitian_defect(a) < tol;
}

inline Operator commutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return a * b - b * a;
}

inline Operator anticommutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return a * b + b * a;
}

inline Operator identity(std::size_t dim) {
  return Operator::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

// General dense exponential (Pade scaling and squaring).
inline Operator expm(const Operator& a) { return a.exp(); }

// exp(i s G) for Hermitian G through its spectral decomposition; unitary to rounding.
inline Operator expm_i_hermitian(const Operator& g, double s) {
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitian_part(g));
  const Eigen::VectorXd& ev = es.eigenvalues();
  CVector phases(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) phases(k) = std::exp(I * (s * ev(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace nhcl
