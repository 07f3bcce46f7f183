#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nhcl/analytic.hpp"

using namespace nhcl;
using namespace nhcl::analytic;

namespace {

// Adaptive Gauss-Kronrod of a complex integrand, real and imaginary parts separately.
template <class F>
cplx integrate_complex(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).real(); }, a, b, 15, 1e-14);
  const double im = gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).imag(); }, a, b, 15, 1e-14);
  return {re, im};
}

const DrivenHOParams kFig = DrivenHOParams::from(1.0, 0.1, 1.0, 0.1);

}  // namespace

TEST(DampedHO, HermitianLimit) {
  const auto s = damped_ho_solution(1.3, 0.0, 2.0, 0.7, -0.4, 2.1);
  EXPECT_NEAR(s.q, 0.7 * std::cos(1.3 * 2.1) + (-0.4 / (2.0 * 1.3)) * std::sin(1.3 * 2.1), 1e-14);
}

TEST(DampedHO, QuarterDecayAtTwoPi) {
  const auto s = damped_ho_solution(1, 0.1, 1, 2, 0, 2 * M_PI);
  EXPECT_NEAR(s.q, 2 * std::exp(-0.2 * M_PI), 1e-12);
  EXPECT_NEAR(s.q, 1.0670, 1e-4);
}

TEST(DampedHO, SolvesSecondOrderEquation) {
  const double w = 1.4, g = 0.25, m = 0.8, h = 1e-4;
  for (double t : {0.3, 1.7, 5.0}) {
    auto q = [&](double s) { return damped_ho_solution(w, g, m, 1.1, 0.6, s).q; };
    const double qd = (q(t + h) - q(t - h)) / (2 * h);
    const double qdd = (q(t + h) - 2 * q(t) + q(t - h)) / (h * h);
    EXPECT_NEAR(qdd + 2 * g * qd + (w * w + g * g) * q(t), 0.0, 1e-6);
    EXPECT_NEAR(damped_ho_solution(w, g, m, 1.1, 0.6, t).p, m * (qd + g * q(t)), 1e-7);
  }
  const auto s0 = damped_ho_solution(w, g, m, 1.1, 0.6, 0.0);
  EXPECT_NEAR(s0.q, 1.1, 1e-15);
  EXPECT_NEAR(s0.p, 0.6, 1e-15);
}

TEST(DampedHO, OscillatesAtUndampedFrequency) {
  // Zero crossings of e^{-g t} cos(w t) are spaced by pi / w regardless of g.
  const double w = 1.0, g = 0.3;
  const auto a = damped_ho_solution(w, g, 1, 1, 0, M_PI / 2);
  const auto b = damped_ho_solution(w, g, 1, 1, 0, 3 * M_PI / 2);
  EXPECT_NEAR(a.q, 0.0, 1e-14);
  EXPECT_NEAR(b.q, 0.0, 1e-14);
}

TEST(DrivenCoefficients, ZeroAtStart) {
  const auto k = driven_coefficients(kFig, 0.0);
  EXPECT_LT(std::abs(k.A) + std::abs(k.B) + std::abs(k.C) + std::abs(k.D), 1e-15);
}

TEST(DrivenCoefficients, UndrivenReduction) {
  const DrivenHOParams p = DrivenHOParams::from(1.0, 0.1, 1.0, 0.0);
  const auto k = driven_coefficients(p, 3.0);
  EXPECT_EQ(k.A, cplx(0.0));
  EXPECT_EQ(k.B, cplx(0.0));
  EXPECT_EQ(k.C, cplx(0.0));
  EXPECT_LT(std::abs(k.D - (std::exp(-I * cplx(1.0, -0.1) * 3.0) - 1.0)), 1e-15);
}

TEST(DrivenCoefficients, MatchQuadratureOfIntegrals) {
  const cplx w = kFig.omega_tilde;
  auto f = [&](double t) { return kFig.f0 * std::cos(kFig.Omega * t); };
  for (double t : {0.7, 5.0, 12.0}) {
    const auto k = driven_coefficients(kFig, t);
    const cplx B = -I * integrate_complex([&](double s) { return std::exp(-I * w * s) * f(s); }, 0, t);
    const cplx C = -I * integrate_complex([&](double s) { return std::exp(I * w * (s - t)) * f(s); }, 0, t);
    const cplx A = -I * integrate_complex([&](double s) { return f(s) * driven_coefficients(kFig, s).C; }, 0, t);
    EXPECT_LT(std::abs(k.B - B), 1e-10) << t;
    EXPECT_LT(std::abs(k.C - C), 1e-10) << t;
    EXPECT_LT(std::abs(k.A - A), 1e-10) << t;
  }
}

TEST(DrivenCoefficients, SatisfyTheirODEs) {
  const double h = 1e-5;
  for (const DrivenHOParams& p : {kFig, DrivenHOParams::from(1.3, 0.05, 0.7, 0.8)}) {
    const cplx w = p.omega_tilde;
    for (double t : {0.5, 3.0, 9.0}) {
      const auto k = driven_coefficients(p, t);
      const auto kp = driven_coefficients(p, t + h);
      const auto km = driven_coefficients(p, t - h);
      const double f = p.f0 * std::cos(p.Omega * t);
      auto d = [&](cplx a, cplx b) { return (a - b) / (2 * h); };
      EXPECT_LT(std::abs(I * d(kp.D, km.D) - w * (k.D + 1.0)), 1e-6);
      EXPECT_LT(std::abs(I * d(kp.B, km.B) - f * (k.D + 1.0)), 1e-6);
      EXPECT_LT(std::abs(I * d(kp.C, km.C) - (w * k.C + f)), 1e-6);
      EXPECT_LT(std::abs(I * d(kp.A, km.A) - f * k.C), 1e-6);
    }
  }
}

TEST(DrivenCoefficients, LongTimeLimits) {
  const double t = 250.0;  // gamma t = 25
  const auto k = driven_coefficients(kFig, t);
  EXPECT_LT(std::abs(k.D + 1.0), 1e-10);
  EXPECT_LT(std::abs(k.B - (-kFig.f0 * kFig.omega_tilde / kFig.detuning())), 1e-10);
  EXPECT_LT(std::abs(k.C - limit_cycle_label(kFig, t)), 1e-10);
}

TEST(DrivenCoefficients, LimitObjectsArePeriodic) {
  const double T = 2 * M_PI / kFig.Omega;
  for (double t : {0.0, 1.3, 4.0})
    EXPECT_LT(std::abs(limit_cycle_label(kFig, t + T) - limit_cycle_label(kFig, t)), 1e-10);
  // A_t minus its linear growth is periodic once the transients have died out.
  const cplx slope = I * kFig.f0 * kFig.f0 * kFig.omega_tilde / (2.0 * kFig.detuning());
  auto periodic_part = [&](double t) { return driven_coefficients(kFig, t).A - slope * t; };
  EXPECT_LT(std::abs(periodic_part(300.0 + T) - periodic_part(300.0)), 1e-10);
}

TEST(DrivenCoefficients, ResonanceGuard) {
  const DrivenHOParams p{cplx(1.0, 0.0), 1.0, 0.1, 1.0};
  try {
    driven_coefficients(p, 1.0);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::near_resonance);
  }
}

TEST(CoherentLabel, UndrivenIsComplexRotation) {
  const DrivenHOParams p = DrivenHOParams::from(1.0, 0.1, 1.0, 0.0);
  const cplx a0(1.2, -0.3);
  EXPECT_LT(std::abs(coherent_label(p, a0, 2.5) - std::exp(-I * p.omega_tilde * 2.5) * a0), 1e-14);
}

TEST(CoherentLabel, FullPeriodReturnWithoutDamping) {
  const DrivenHOParams p = DrivenHOParams::from(1.0, 0.0, 1.0, 0.0);
  EXPECT_LT(std::abs(coherent_label(p, 1.0, 2 * M_PI) - 1.0), 1e-14);
}

TEST(CoherentLabel, SolvesClassicalEquation) {
  const double h = 1e-5;
  const cplx a0(1.4, 0.2);
  for (double t : {0.4, 6.0}) {
    const cplx da = (coherent_label(kFig, a0, t + h) - coherent_label(kFig, a0, t - h)) / (2 * h);
    const cplx rhs = kFig.omega_tilde * coherent_label(kFig, a0, t) + kFig.f0 * std::cos(t);
    EXPECT_LT(std::abs(I * da - rhs), 1e-8);
  }
}

TEST(CoherentLabel, ApproachesLimitCycle) {
  const cplx a0(std::sqrt(2.0), 0.0);
  EXPECT_LT(std::abs(coherent_label(kFig, a0, 300.0) - limit_cycle_label(kFig, 300.0)), 1e-12);
}

TEST(NormFormula, Values) {
  EXPECT_EQ(norm_formula(1.0, 0.1, 0.0), 1.0);
  const double expected = std::exp(-1.0 - 2.0 * (1.0 - std::exp(-2.0)));
  EXPECT_NEAR(norm_formula(cplx(std::sqrt(2.0), 0.0), 0.1, 10.0), expected, 1e-15);
  EXPECT_NEAR(expected, 0.06526, 1e-5);
}

TEST(NormFormula, InitialSlopeIsTwiceMeanDamping) {
  // dn/dt at 0 is -2<Gamma>/hbar = -2 k hbar w (|a0|^2 + 1/2) / hbar = -gamma (1 + 2|a0|^2).
  const cplx a0(1.0, 1.0);
  const double g = 0.1, h = 1e-6;
  const double slope = (norm_formula(a0, g, h) - norm_formula(a0, g, -h)) / (2 * h);
  EXPECT_NEAR(slope, -g * (1 + 2 * std::norm(a0)), 1e-8);
}

TEST(LimitCycle, Values) {
  const auto lc = limit_cycle(1.01, 0.1, 1.0, 1.0);
  EXPECT_NEAR(lc.Q, 1.0 / std::sqrt(0.01 * 0.01 + 0.04), 1e-14);
  EXPECT_NEAR(lc.Q, 1.0 / 0.20025, 1e-4);
  EXPECT_NEAR(limit_cycle(1.0, 0.2, 1.0, 1.0).delta, M_PI / 2, 1e-15);
  EXPECT_NEAR(limit_cycle(4.0, 0.0, 1.0, 3.0).Q, 1.0, 1e-15);
  EXPECT_NEAR(limit_cycle(4.0, 0.0, 1.0, 3.0).delta, 0.0, 1e-15);
  EXPECT_NEAR(limit_cycle(1.0, 0.0, 2.0, 3.0).delta, M_PI, 1e-15);
  EXPECT_FALSE(limit_cycle(1.0, 0.1, 1.0, 0.0).phase_defined);
}

TEST(LimitCycle, AgreesWithCoherentLimitLabel) {
  // q on the attractor from the label must equal Q cos(Omega t - delta) with F0 from f0.
  const double w = 1.0, g = 0.1, m = 1.0, hbar = 1.0;
  for (double f0 : {0.1, 1.0, -0.3}) {
    const DrivenHOParams p = DrivenHOParams::from(w, g, 1.0, f0, hbar);
    const auto lc = limit_cycle(w * w + g * g, g, 1.0, force_amplitude(f0, m, w, hbar));
    for (double t : {0.0, 0.8, 2.5}) {
      const double q = Frame{m, w, hbar}.q(limit_cycle_label(p, t));
      EXPECT_NEAR(q, lc.Q * std::cos(t - lc.delta), 1e-12);
    }
  }
}

TEST(Quasienergy, Ladder) {
  const cplx e0 = quasienergy(0, kFig);
  const cplx w = kFig.omega_tilde;
  EXPECT_LT(std::abs(e0 - 0.5 * w * (1.0 - 0.01 / (w * w - 1.0))), 1e-15);
  EXPECT_LT(std::abs(e0 - cplx(0.4987531172069825, -0.07506234413965088)), 1e-12);
  for (int n = 0; n < 5; ++n) EXPECT_LT(std::abs(quasienergy(n + 1, kFig) - quasienergy(n, kFig) - w), 1e-14);
  const DrivenHOParams undriven = DrivenHOParams::from(1.0, 0.1, 1.0, 0.0);
  EXPECT_LT(std::abs(quasienergy(3, undriven) - 3.5 * w), 1e-15);
  EXPECT_THROW(quasienergy(-1, kFig), error);
}

TEST(ExactDrivenState, InitialIsCoherent) {
  const cplx a0(1.0, 0.5);
  const QuantumState s = exact_driven_state(kFig, a0, 0.0, 64);
  EXPECT_NEAR(s.norm_sq(), 1.0, 1e-12);
  EXPECT_NEAR(husimi_overlap(s, {a0, Frame{}}), 1.0, 1e-12);
}

TEST(ExactDrivenState, UndrivenNormFollowsLaw) {
  const DrivenHOParams p = DrivenHOParams::from(1.0, 0.1, 1.0, 0.0);
  const cplx a0(std::sqrt(2.0), 0.0);
  for (double t : {1.0, 10.0, 25.0})
    EXPECT_NEAR(exact_driven_state(p, a0, t, 64).norm_sq() / norm_formula(a0, 0.1, t), 1.0, 1e-12);
}
