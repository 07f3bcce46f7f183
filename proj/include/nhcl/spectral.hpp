#pragma once

// Biorthogonal eigen-decomposition of a non-Hermitian operator.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nhcl/linalg.hpp"
#include "nhcl/state.hpp"

namespace nhcl {

struct SpectralData {
  CVector eigenvalues;  // E_n - i Gamma_n, ascending Gamma_n then ascending E_n
  Operator right;       // columns |phi_n>
  Operator left;        // columns with left.col(m)^dag right.col(n) = delta_mn

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
  double decay_rate(std::size_t n) const { return -eigenvalues(static_cast<Eigen::Index>(n)).imag(); }

  CVector coefficients(const CVector& psi) const { return left.adjoint() * psi; }

  // Most stable eigenstate with |c_n| above the threshold; this is the long-time attractor.
  std::optional<std::size_t> dominant_index(const CVector& psi, double threshold = 1e-10) const {
    const CVector c = coefficients(psi);
    for (Eigen::Index n = 0; n < c.size(); ++n)
      if (std::abs(c(n)) > threshold) return static_cast<std::size_t>(n);
    return std::nullopt;
  }

  // sum_n c_n exp(-i E_n t / hbar) |phi_n>
  CVector evolve(const CVector& psi0, double t, double hbar = 1.0) const {
    const CVector c = coefficients(psi0);
    CVector phase(c.size());
    for (Eigen::Index n = 0; n < c.size(); ++n) phase(n) = c(n) * std::exp(-I * eigenvalues(n) * t / hbar);
    return right * phase;
  }
};

inline SpectralData spectral_decomposition(const Operator& h_total) {
  if (h_total.rows() != h_total.cols() || h_total.rows() == 0)
    throw error(errc::invalid_dimension, "spectral decomposition needs a square operator");
  Eigen::ComplexEigenSolver<Operator> es(h_total, true);
  if (es.info() != Eigen::Success) throw error(errc::near_exceptional_point, "eigensolver did not converge");

  const Eigen::Index n = h_total.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const CVector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ga = -ev(a).imag(), gb = -ev(b).imag();
    if (ga != gb) return ga < gb;
    return ev(a).real() < ev(b).real();
  });

  SpectralData out;
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = ev(order[static_cast<std::size_t>(k)]);
    out.right.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]).normalized();
  }

  const double scale = std::max(1.0, max_abs(h_total));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double res = (h_total * out.right.col(k) - out.eigenvalues(k) * out.right.col(k)).norm() / scale;
    if (!std::isfinite(res) || res > 1e-6)
      throw error(errc::near_exceptional_point, "eigenvector residual " + std::to_string(res));
  }

  // Coalescing eigenvectors show up as an ill-conditioned eigenvector matrix.
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Operator>(out.right).singularValues();
  if (!(sv(n - 1) > 1e-8 * sv(0)))
    throw error(errc::near_exceptional_point, "eigenvector matrix condition number exceeds 1e8");
  Eigen::PartialPivLU<Operator> lu(out.right);
  out.left = lu.inverse().adjoint();
  const double bio = max_abs(out.left.adjoint() * out.right - Operator::Identity(n, n));
  if (!std::isfinite(bio) || bio > 1e-6)
    throw error(errc::near_exceptional_point, "eigenvectors nearly dependent, biorthogonality defect " +
                                                  std::to_string(bio));
  return out;
}

}  // namespace nhcl
