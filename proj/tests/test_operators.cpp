#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "nhcl/coherent.hpp"
#include "nhcl/operators.hpp"
#include "nhcl/quantum.hpp"

using namespace nhcl;

TEST(Ladder, LowestTruncation) {
  const auto [a, ad] = ladder_matrices(2);
  EXPECT_EQ(a(0, 1), cplx(1.0));
  EXPECT_EQ(a(0, 0), cplx(0.0));
  EXPECT_EQ(a(1, 0), cplx(0.0));
  EXPECT_EQ(a(1, 1), cplx(0.0));
  EXPECT_EQ(max_abs(ad - a.adjoint()), 0.0);
}

TEST(Ladder, NumberOperatorDiagonal) {
  const auto [a, ad] = ladder_matrices(4);
  const Operator n = ad * a;
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(n(k, k).real(), k, 1e-15);
}

TEST(Ladder, CommutatorTruncationDefect) {
  const auto [a, ad] = ladder_matrices(6);
  Operator expected = identity(6);
  expected(5, 5) = -5.0;
  EXPECT_LT(max_abs(commutator(a, ad) - expected), 1e-14);
}

TEST(Ladder, RejectsTinyDimension) {
  EXPECT_THROW(ladder_matrices(1), error);
  try {
    ladder_matrices(0);
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::invalid_dimension);
  }
}

TEST(PositionMomentum, SmallCase) {
  const auto [q, p] = position_momentum(2, 1, 1, 1);
  EXPECT_NEAR(q(0, 1).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(q(1, 0).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(is_hermitian(q));
  EXPECT_TRUE(is_hermitian(p));
}

TEST(PositionMomentum, CanonicalCommutatorExceptLastEntry) {
  for (double hbar : {1.0, 0.3}) {
    const int dim = 12;
    const auto [q, p] = position_momentum(dim, 2.0, 0.7, hbar);
    Operator c = commutator(q, p);
    Operator expected = (I * hbar) * identity(dim);
    // Entry (dim-1, dim-1) carries the truncation defect -i hbar (dim-1).
    expected(dim - 1, dim - 1) = -I * hbar * double(dim - 1);
    EXPECT_LT(max_abs(c - expected), 1e-12);
  }
}

TEST(PositionMomentum, CoherentMeanPosition) {
  const auto [q, p] = position_momentum(64, 1, 1, 1);
  const QuantumState s = glauber_state({cplx(2.0 / std::sqrt(2.0), 0.0), Frame{}}, 64);
  EXPECT_NEAR(expectation_real(s, q), 2.0, 1e-10);
  EXPECT_NEAR(expectation_real(s, p), 0.0, 1e-10);
}

TEST(PositionMomentum, RejectsNonPositive) {
  EXPECT_THROW(position_momentum(4, 0, 1, 1), error);
  EXPECT_THROW(position_momentum(4, 1, -1, 1), error);
  EXPECT_THROW(position_momentum(4, 1, 1, 0), error);
}

TEST(AngularMomentum, SpinHalf) {
  const auto [lx, ly, lz] = angular_momentum_matrices(0.5);
  EXPECT_EQ(lz.rows(), 2);
  EXPECT_NEAR(lz(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(lz(1, 1).real(), -0.5, 1e-15);
}

TEST(AngularMomentum, SpinOneLxSpectrum) {
  const auto [lx, ly, lz] = angular_momentum_matrices(1.0);
  Eigen::SelfAdjointEigenSolver<Operator> es(lx);
  EXPECT_NEAR(es.eigenvalues()(0), -1.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(1), 0.0, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(2), 1.0, 1e-12);
}

TEST(AngularMomentum, AlgebraClosesForSeveralL) {
  for (double L : {0.5, 1.0, 2.5, 5.0, 20.0}) {
    const auto [lx, ly, lz] = angular_momentum_matrices(L);
    EXPECT_LT(max_abs(commutator(lx, ly) - I * lz), 1e-12) << L;
    EXPECT_LT(max_abs(commutator(ly, lz) - I * lx), 1e-12) << L;
    const Operator casimir = lx * lx + ly * ly + lz * lz;
    EXPECT_LT(max_abs(casimir - L * (L + 1) * identity(lx.rows())), 1e-10) << L;
  }
}

TEST(AngularMomentum, RejectsInvalidL) {
  EXPECT_THROW(angular_momentum_matrices(0.0), error);
  EXPECT_THROW(angular_momentum_matrices(0.3), error);
  EXPECT_THROW(angular_momentum_matrices(-1.0), error);
}

namespace {
HamiltonianSpec harmonic(double k, std::size_t = 0) {
  HamiltonianSpec s;
  s.family = Family::harmonic;
  s.damping.k = k;
  return s;
}
}  // namespace

TEST(BuildHamiltonian, HermitianLimitHasNoDamping) {
  const auto [h, g] = build_hamiltonian(harmonic(0.0), 10);
  EXPECT_EQ(max_abs(g), 0.0);
  EXPECT_TRUE(is_hermitian(h));
}

TEST(BuildHamiltonian, SpinHalfDamping) {
  HamiltonianSpec s;
  s.family = Family::spin;
  s.spin = {0.0, 0.0, 0.0, 1.0, 0.5};
  const auto [h, g] = build_hamiltonian(s, 2);
  EXPECT_NEAR(g(0, 0).real(), 2.0, 1e-15);
  EXPECT_NEAR(std::abs(g(1, 1)), 0.0, 1e-15);
  EXPECT_EQ(max_abs(h), 0.0);
}

TEST(BuildHamiltonian, AnharmonicEntrywise) {
  HamiltonianSpec s;
  s.family = Family::anharmonic;
  s.beta = 0.4;
  s.damping.k = 0.1;
  const auto [q, p] = position_momentum(8, 1, 1, 1);
  const Operator expected = p * p / 2.0 + 0.5 * q * q + 0.1 * (q * q * q * q);
  EXPECT_LT(max_abs(build_hamiltonian(s, 8).H - expected), 1e-12);
}

TEST(BuildHamiltonian, DampedHarmonicIsComplexFrequencyLadder) {
  for (double hbar : {1.0, 0.5}) {
    HamiltonianSpec s = harmonic(0.1);
    s.hbar = hbar;
    s.omega = 1.3;
    const int dim = 20;
    const Operator total = build_hamiltonian(s, dim).total();
    const auto [a, ad] = ladder_matrices(dim);
    const Operator ladder = hbar * cplx(1.3, -0.13) * (ad * a + 0.5 * identity(dim));
    EXPECT_LT(max_abs((total - ladder).topLeftCorner(dim - 1, dim - 1)), 1e-12);
  }
}

TEST(BuildHamiltonian, PropertiesAcrossFamilies) {
  std::vector<std::pair<HamiltonianSpec, std::size_t>> specs;
  for (auto kind : {DampingKind::proportional_to_H0, DampingKind::kinetic_only, DampingKind::none}) {
    for (auto fam : {Family::harmonic, Family::anharmonic, Family::driven_harmonic}) {
      HamiltonianSpec s;
      s.family = fam;
      s.damping = {kind, 0.2, std::nullopt};
      if (fam == Family::anharmonic) s.beta = 0.4;
      if (fam == Family::driven_harmonic) s.drive = Drive{0.3, 1.1};
      specs.emplace_back(s, 24);
    }
  }
  HamiltonianSpec spin;
  spin.family = Family::spin;
  spin.spin = {0.3, 1.0, 0.05, 0.1, 3.5};
  specs.emplace_back(spin, 8);

  for (const auto& [s, dim] : specs) {
    for (double t : {0.0, 0.7}) {
      const auto [h, g] = build_hamiltonian(s, dim, t);
      EXPECT_LT(antihermitian_defect(h), 1e-12);
      EXPECT_LT(antihermitian_defect(g), 1e-12);
      Eigen::SelfAdjointEigenSolver<Operator> es(g);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    }
  }
  const auto [lx, ly, lz] = angular_momentum_matrices(3.5);
  EXPECT_LT(max_abs(build_hamiltonian(spin, 8).Gamma - 0.2 * (lz + 3.5 * identity(8))), 1e-12);
}

TEST(BuildHamiltonian, DriveEntersAsCosineTimesQuadrature) {
  HamiltonianSpec s;
  s.family = Family::driven_harmonic;
  s.drive = Drive{0.4, 2.0};
  const auto [a, ad] = ladder_matrices(10);
  const Operator h0 = build_hamiltonian(s, 10, M_PI / 4).H;  // cos(pi/2) = 0
  const Operator h1 = build_hamiltonian(s, 10, 0.0).H;
  EXPECT_LT(max_abs(h1 - h0 - 0.4 * (a + ad)), 1e-12);
}

TEST(BuildHamiltonian, SpecErrors) {
  HamiltonianSpec spin;
  spin.family = Family::spin;
  spin.spin.L = 1.0;
  EXPECT_THROW(build_hamiltonian(spin, 4), error);
  HamiltonianSpec h = harmonic(0.1);
  h.beta = 1.0;
  EXPECT_THROW(build_hamiltonian(h, 4), error);
  HamiltonianSpec d;
  d.family = Family::driven_harmonic;
  EXPECT_THROW(build_hamiltonian(d, 4), error);
  HamiltonianSpec neg = harmonic(-0.1);
  EXPECT_THROW(build_hamiltonian(neg, 4), error);
}
