#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace lagstab;
using fixtures::Cart;
using fixtures::kG;
using fixtures::Wheel;

namespace {

RstuSode cart_without_M(double d) {
  const auto bs = Cart{}.with_d(d);
  return to_normal_form(bs.system, QuadraticControl{Profile(), bs.control->N});
}

MultiplierOptions with_A(double A, double rho1 = 0) {
  MultiplierOptions o;
  o.A = A;
  o.rho1 = rho1;
  return o;
}

}  // namespace

TEST(Rank1, CartNewControlSolvesIt) {
  EXPECT_LT(std::abs(rank1_residual(Cart{}.sode_d(7 * kG), 0.3)), 1e-8);
}

TEST(Rank1, FreeSystem) { EXPECT_EQ(rank1_residual(fixtures::free_sode(), 0.4), 0.0); }

TEST(Rank1, MismatchedControl) {
  EXPECT_GT(std::abs(rank1_residual(cart_without_M(7 * kG), 0.3)), 1e-3);
}

TEST(Nu, WheelIsConstant) {
  const Wheel w;
  const RstuSode s = w.sode();
  EXPECT_NEAR(w.nu(), -410.9, 0.05);
  for (double y : {-1.0, 0.0, 0.4}) EXPECT_NEAR(nu(s, y), w.nu(), 1e-9 * 410.9);
}

TEST(Nu, CartMatchesClosedForm) {
  const Cart c;
  const double d = 7 * kG;
  const RstuSode s = c.sode_d(d);
  const double at0 = -2 * (c.beta * c.delta + c.alpha * d) / (2 * c.gamma * c.delta + 2 * c.beta * d);
  EXPECT_NEAR(nu(s, 0.0), at0, 1e-12);
  EXPECT_NEAR(at0, -1.5, 1e-12);
  for (double y : {-0.7, -0.3, 0.5}) EXPECT_NEAR(nu(s, y), c.nu(d, y), 1e-12);
  // Its derivative against differences of the closed form.
  const double y = 0.3, h = 1e-5;
  EXPECT_NEAR(nu_jet(s(y), y).d1(), (c.nu(d, y + h) - c.nu(d, y - h)) / (2 * h), 1e-8);
}

TEST(Nu, VanishesWhenPhi12Does) {
  // a12 = 0, V = y^2, no control: U = T = 0, S = -2y, Phi^2_2 = 2.
  const RstuSode s = to_normal_form(fixtures::custom("0", "1", "y^2"), {});
  EXPECT_EQ(nu(s, 0.3), 0.0);
  EXPECT_THROW(nu(fixtures::free_sode(), 0.3), Phi22Vanishes);
}

TEST(VariationalCheck, Examples) {
  const VariationalityVerdict w = variational_check(Wheel{}.sode());
  EXPECT_TRUE(w.is_variational);
  EXPECT_EQ(w.branch, VariationalBranch::EquivalentCriteria);
  EXPECT_LT(w.rank1_max_residual, 1e-9);
  EXPECT_LT(w.potential_residual, 1e-9);
  EXPECT_LT(w.nu_residual, 1e-9);

  Wheel critical;
  critical.d1 = critical.m;
  const VariationalityVerdict c = variational_check(critical.sode());
  EXPECT_TRUE(c.is_variational);
  EXPECT_EQ(c.branch, VariationalBranch::Phi22Zero);

  const VariationalityVerdict m = variational_check(cart_without_M(7 * kG));
  EXPECT_FALSE(m.is_variational);
  EXPECT_GT(m.rank1_max_residual, 1e-3);
}

TEST(Multiplier, WheelIsConstant) {
  const Multiplier m = build_multiplier(Wheel{}.sode());
  for (double y : {-1.0, 0.0, 0.3, 1.2}) {
    EXPECT_NEAR(m.rho2(y).value(), 1.0, 1e-12);
    EXPECT_NEAR(m.g12(y), -Wheel{}.nu(), 1e-8);
  }
  EXPECT_EQ(m.g11(), 1.0);
}

TEST(Multiplier, ConstantOfIntegration) {
  // R = 0 for the wheel, so rho2 = A.
  const Multiplier m = build_multiplier(Wheel{}.sode(), with_A(2.0));
  EXPECT_NEAR(m.rho2(0.7).value(), 2.0, 1e-12);
}

TEST(Multiplier, CartBlmMatchesClosedForm) {
  const auto bs = Cart{}.with_kappa(3);
  const RstuSode s = to_normal_form(bs.system, *bs.control, Interval{-0.5, 0.5});
  const Multiplier m = build_multiplier(s);
  // rho2 is proportional to beta^2 (kappa + 1) cos^2 - alpha gamma = 4 cos^2 - 3.
  for (double y : {-0.45, -0.2, 0.0, 0.1, 0.4}) {
    EXPECT_NEAR(m.rho2(y).value(), 4 * std::cos(y) * std::cos(y) - 3, 1e-9) << y;
    EXPECT_NEAR(m.nu(y).value(), -4 * std::cos(y) / 3, 1e-12);
  }
}

TEST(Multiplier, CartNewControlMatchesClosedForm) {
  const Cart c;
  const double d = 7 * kG;
  const Multiplier m = build_multiplier(c.sode_d(d));
  for (double y : {-0.7, -0.35, 0.2, 0.6, 0.78})
    EXPECT_NEAR(m.rho2(y).value(), c.rho2_shape(d, y) / c.rho2_shape(d, 0), 1e-9 * m.rho2(y).value()) << y;
}

TEST(Multiplier, RefusesVanishingPhi22) {
  EXPECT_THROW(build_multiplier(fixtures::free_sode()), Phi22Vanishes);
  EXPECT_THROW(build_multiplier(Wheel{}.sode().with_interval({0.1, 0.5})), InvalidParameter);
}

TEST(Potential, WheelCurvature) {
  const Wheel w;
  const Multiplier m = build_multiplier(w.sode());
  EXPECT_NEAR(m.potential(0).d2(), (w.d1 - w.m) / (w.a - w.b), 1e-8);
  EXPECT_NEAR(m.potential(0).d2(), 45.74, 5e-3);
  const PotentialChecks pc = potential_checks(m, w.sode());
  EXPECT_NEAR(pc.v_second_0, 45.7416, 1e-3);
  EXPECT_NEAR(pc.v_prime_0, 0.0, 1e-9);
  // V = (d1 - m)(1 - cos y)/(a - b) when rho2 = 1.
  for (double y : {-1.0, 0.2, 1.3})
    EXPECT_NEAR(m.potential(y).value(), (w.d1 - w.m) * (1 - std::cos(y)) / (w.a - w.b), 1e-9);
}

TEST(Potential, CartCurvature) {
  const Cart c;
  const double d = 7 * kG;
  const RstuSode s = c.sode_d(d);
  const Multiplier m = build_multiplier(s);
  const double expect = m.rho2(0).value() * (c.gamma * c.delta + c.beta * d) / (c.alpha * c.gamma - 1);
  EXPECT_NEAR(m.potential(0).d2(), expect, 1e-8);
  EXPECT_NEAR(potential_checks(m, s).v_second_0, expect, 1e-5);
}

TEST(Energy, Examples) {
  const Wheel w;
  const Multiplier m = build_multiplier(w.sode());
  EXPECT_EQ(m.energy(0, 0, 0), 0.0);
  EXPECT_NEAR(m.energy(0, 1, 0), 0.5, 1e-15);
  const double y = 0.01;
  const double V = (w.d1 - w.m) * (1 - std::cos(y)) / (w.a - w.b);
  EXPECT_NEAR(m.energy(y, 0, 0.02), 0.5 * (w.nu() * w.nu() + 1) * 0.02 * 0.02 + V, 1e-9);
}

TEST(Helmholtz, Examples) {
  const Multiplier mw = build_multiplier(Wheel{}.sode());
  for (double y : {-0.5, 0.1, 1.0})
    for (double v : {-1.0, 0.5, 1.0}) EXPECT_LT(helmholtz_residual(Wheel{}.sode(), mw, y, v).max(), 1e-10);
  // The residual is linear in ydot, and rounding in nu' (which grows like
  // 1/Phi^2_2 towards the interval ends) is amplified by 2 |nu| |ydot|.
  for (double y : {-1.4, 1.2, 1.4})
    for (double v : {-2.0, 10.0})
      EXPECT_LT(helmholtz_residual(Wheel{}.sode(), mw, y, v).max() / std::abs(v), 1e-8);

  const RstuSode cart = Cart{}.sode_d(7 * kG);
  const Multiplier mc = build_multiplier(cart);
  EXPECT_LT(helmholtz_residual(cart, mc, 0.3, 1.5).max(), 1e-8);
}

TEST(Helmholtz, DetectsWrongMultiplier) {
  // The wheel's multiplier applied to the cart is not a multiplier of the cart.
  const RstuSode cart = Cart{}.sode_d(7 * kG);
  const Multiplier mw = build_multiplier(Wheel{}.sode());
  EXPECT_GT(helmholtz_residual(cart, mw, 0.3, 1.0).max(), 1e-3);
}

TEST(VariationalProperty, CriteriaAgreeOnPerturbedWheelControls) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> U(-1, 1);
  const Wheel w;
  const auto bs = w.builtin();
  int compared = 0, variational = 0;
  for (int k = 0; k < 100; ++k) {
    ParameterMap p = {{"d1", w.d1 + 0.1 * 60 * U(rng)}, {"e", 0.1 * U(rng)}, {"f", 0.1 * U(rng)}};
    // Half the draws only move the gain (still variational), half change the shape.
    if (k % 2 == 0) p["e"] = p["f"] = 0;
    const QuadraticControl u{parse("$f*sin(y)", p), parse("$d1*sin(y) + $e*sin(2*y)", p)};
    const RstuSode s = to_normal_form(bs.system, u);
    const CriteriaResiduals r = criteria_residuals(s, 256);
    if (r.min_abs_phi22 <= 1e-3) continue;
    const double tol = 1e-7;
    EXPECT_EQ(r.rank1 < tol, r.potential < tol) << k;
    EXPECT_EQ(r.rank1 < tol, r.nu_ode < tol) << k;
    ++compared;
    variational += r.rank1 < tol;
  }
  EXPECT_GE(compared, 90);
  EXPECT_GE(variational, 40);
  EXPECT_LT(variational, compared);
}

TEST(VariationalProperty, Rho2SolvesItsEquation) {
  // d = 5g keeps Phi^2_2 away from zero only for |y| < 0.68.
  for (const RstuSode& s : {Cart{}.sode_d(7 * kG), Cart{}.sode_d(5 * kG).with_interval({-0.6, 0.6}), Wheel{}.sode()}) {
    MultiplierOptions o;
    const Multiplier m = build_multiplier(s, o);
    const Interval iv = m.interval();
    for (int i = 0; i < 200; ++i) {
      const double y = iv.midpoint(i, 200);
      const Jet2 r = m.rho2(y);
      EXPECT_LE(std::abs(r.d1() + 2 * s(y).R.value() * r.value()), 10 * o.quad_tol * std::abs(r.value())) << y;
    }
  }
}

TEST(VariationalProperty, PotentialSolvesItsEquation) {
  const RstuSode s = Cart{}.sode_d(7 * kG);
  const Multiplier m = build_multiplier(s);
  EXPECT_EQ(m.potential(0).value(), 0.0);
  for (int i = 0; i < 100; ++i) {
    const double y = m.interval().midpoint(i, 100);
    const double expect = -m.rho2(y).value() * s(y).S.value();
    EXPECT_NEAR(m.potential(y).d1(), expect, 1e-9 * (1 + std::abs(expect)));
  }
}

TEST(VariationalProperty, PositiveDefinite) {
  for (const RstuSode& s : {Cart{}.sode_d(7 * kG), Wheel{}.sode()}) {
    const Multiplier m = build_multiplier(s);
    for (int i = 0; i < 256; ++i) {
      const double y = m.interval().midpoint(i, 256);
      const double det = m.g11() * m.g22(y) - m.g12(y) * m.g12(y);
      EXPECT_GT(m.g11(), 0);
      EXPECT_GT(det, 0);
      EXPECT_NEAR(det, m.rho2(y).value(), 1e-9 * (m.g22(y) + 1));
    }
  }
}

TEST(VariationalProperty, PotentialIdentityAtEquilibrium) {
  for (const RstuSode& s : {Cart{}.sode_d(7 * kG), Wheel{}.sode()}) {
    const PotentialChecks pc = potential_checks(build_multiplier(s), s);
    EXPECT_LE(std::abs(pc.v_second_0 - pc.expected_second), 1e-6 * (1 + std::abs(pc.s_prime_0)));
  }
}

TEST(VariationalProperty, NegativeDefiniteVariant) {
  const RstuSode s = Cart{}.sode_d(7 * kG);
  const Multiplier pos = build_multiplier(s, with_A(1.0, 1.0));
  const Multiplier neg = build_multiplier(s, with_A(-1.0, -1.0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> Y(-0.7, 0.7), V(-2, 2);
  for (int k = 0; k < 100; ++k) {
    const double y = Y(rng), xd = V(rng), yd = V(rng);
    EXPECT_NEAR(neg.g12(y), -pos.g12(y), 1e-12 * (1 + std::abs(pos.g12(y))));
    EXPECT_NEAR(neg.g22(y), -pos.g22(y), 1e-12 * (1 + std::abs(pos.g22(y))));
    EXPECT_NEAR(neg.energy(y, xd, yd), -pos.energy(y, xd, yd), 1e-12 * (1 + std::abs(pos.energy(y, xd, yd))));
  }
  EXPECT_EQ(neg.g11(), -1.0);
  // Default rho1 follows the sign of A.
  EXPECT_EQ(build_multiplier(s, with_A(-2.0)).rho1(), -1.0);
}
