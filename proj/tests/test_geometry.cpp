#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace lagstab;
using fixtures::Cart;
using fixtures::kG;
using fixtures::Wheel;

TEST(Connection, FreeSystemIsFlat) {
  const auto [g1, g2] = connection(fixtures::free_sode(), 0.3, 2.0);
  EXPECT_EQ(g1, 0.0);
  EXPECT_EQ(g2, 0.0);
}

TEST(Connection, WheelHasNoQuadraticTerms) {
  const auto [g1, g2] = connection(Wheel{}.sode(), 0.1, 2.0);
  EXPECT_NEAR(g1, 0.0, 1e-12);
  EXPECT_NEAR(g2, 0.0, 1e-12);
}

TEST(Connection, UncontrolledCart) {
  const Cart c;
  const auto bs = builtin("cart-pendulum", Cart::params());
  const RstuSode sode = to_normal_form(bs.system, {});
  const double y = 0.2;
  const double oracle = c.beta * c.beta * std::sin(y) * std::cos(y) / c.den(y);
  EXPECT_NEAR(oracle, 0.09547, 1e-5);
  EXPECT_NEAR(connection(sode, y, 1.0).second, oracle, 1e-12);
}

TEST(Jacobi, WheelAtEquilibrium) {
  const Wheel w;
  const auto [p12, p22] = jacobi(w.sode(), 0.0);
  EXPECT_NEAR(p22, (w.d1 - w.m) / (w.a - w.b), 1e-10 * 45.74);
  EXPECT_NEAR(p22, 45.74, 5e-3);
  EXPECT_NEAR(p12, (w.a * w.d1 - w.b * w.m) / (w.b * (w.b - w.a)), 1e-10 * 18795.6);
  EXPECT_NEAR(p12, -18795.6, 0.2);
  const SodeCoefficients c = w.sode()(0.0);
  EXPECT_NEAR(p12, -c.U.d1() + c.S.value() * c.T.value(), 1e-9);
}

TEST(Jacobi, FreeSystemIsZero) {
  const auto [p12, p22] = jacobi(fixtures::free_sode(), 0.4);
  EXPECT_EQ(p12, 0.0);
  EXPECT_EQ(p22, 0.0);
}

// The displayed Jacobi components for the cart are twice -U' + ST and -S' + RS.
TEST(Jacobi, CartNewControlIsHalfTheDisplayedForm) {
  const Cart c;
  const double d = 7 * kG;
  const RstuSode sode = c.sode_d(d);
  for (double y : {-0.7, -0.2, 0.0, 0.4}) {
    const double cy = std::cos(y), c2 = std::cos(2 * y);
    const double common = -2 * c.beta * c.beta * c.delta + 2 * c.alpha * c.gamma * c.delta - c.alpha * c.beta * d +
                          c.alpha * c.beta * d * c2;
    const double den = 2 * c.delta * std::pow(c.den(y), 2);
    const double disp22 = cy * c.q(d, y) * common / den;
    const double disp12 = -(c.beta * c.delta + c.alpha * d) * cy * cy * common / (c.delta * std::pow(c.den(y), 2));
    const auto [p12, p22] = jacobi(sode, y);
    EXPECT_NEAR(p22, disp22 / 2, 1e-10 * std::abs(disp22));
    EXPECT_NEAR(p12, disp12 / 2, 1e-10 * std::abs(disp12));
  }
}

TEST(NablaPhi, ZeroVelocity) {
  const auto [a, b] = nabla_phi(Cart{}.sode_d(7 * kG), 0.3, 0.0);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
}

TEST(NablaPhi, WheelSecondComponent) {
  const Wheel w;
  const double y = 0.1;
  // (nabla Phi)^2_2 = -S'' = S for the sine law.
  const double oracle = (w.m - w.d1) * std::sin(y) / (w.a - w.b);
  EXPECT_NEAR(oracle, -4.566, 1e-3);
  EXPECT_NEAR(nabla_phi(w.sode(), y, 1.0).second, oracle, 1e-10);
}

TEST(NablaPhi, FreeSystem) {
  const auto [a, b] = nabla_phi(fixtures::free_sode(), 0.2, 3.0);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
}

TEST(Haantjes, VanishesForTheExamples) {
  const Wheel w;
  EXPECT_NEAR(haantjes_component(w.sode(), 0.3), 0.0, 1e-9 * std::pow(18795.6, 2) * 45.74);
  const auto cart = Cart{}.sode_d(7 * kG);
  EXPECT_NEAR(haantjes_component(cart, 0.5), 0.0, 1e-8);
  EXPECT_EQ(haantjes_component(fixtures::free_sode(), 0.1), 0.0);
}

TEST(Classify, Examples) {
  const DouglasReport cart = classify(Cart{}.sode_d(7 * kG));
  EXPECT_EQ(cart.overall(), DouglasCase::CaseIIa1);
  ASSERT_EQ(cart.segments.size(), 1u);
  EXPECT_NEAR(cart.segments[0].lo, -std::numbers::pi / 4, 1e-15);

  EXPECT_EQ(classify(Wheel{}.sode()).overall(), DouglasCase::CaseIIa1);
  EXPECT_EQ(classify(fixtures::free_sode()).overall(), DouglasCase::CaseI);
  EXPECT_EQ(to_string(DouglasCase::CaseIIb1prime), "CaseIIb1prime");
}

TEST(Classify, WheelAtCriticalGainIsCaseIIb) {
  Wheel w;
  w.d1 = w.m;
  // Phi^2_2 vanishes identically while Phi^1_2 does not.
  EXPECT_EQ(classify(w.sode()).overall(), DouglasCase::CaseIIb1prime);
}

TEST(Classify, MismatchedControlLeavesCaseII) {
  const auto bs = Cart{}.with_d(7 * kG);
  QuadraticControl u = *bs.control;
  u.M = Profile();
  const DouglasReport rep = classify(to_normal_form(bs.system, u));
  EXPECT_NE(rep.overall(), DouglasCase::CaseIIa1);
  bool any_iiib = false;
  for (const auto& s : rep.segments) any_iiib |= s.verdict == DouglasCase::CaseIIIb;
  EXPECT_TRUE(any_iiib);
}

TEST(Classify, SplitsAtSignChangeOfPhi22) {
  // a12 = 1/2, a22 = 1, V = 0 and N = y^3 - y: S = -(2/3) N, so Phi^2_2 = -S'
  // changes sign at +-1/sqrt(3) while U = -2 S keeps the system in Case II.
  const RstuSode sode = to_normal_form(fixtures::custom("0.5", "1", "0"), QuadraticControl{Profile(), parse("y^3 - y")},
                                       Interval{-1.2, 1.2});
  const DouglasReport rep = classify(sode);
  ASSERT_GE(rep.segments.size(), 3u);
  EXPECT_EQ(rep.segments.front().verdict, DouglasCase::CaseIIa1);
  EXPECT_NE(rep.samples[rep.segments.front().first].Phi22 > 0, rep.samples[rep.segments[1].last].Phi22 > 0);
  for (std::size_t i = 1; i < rep.segments.size(); ++i)
    EXPECT_DOUBLE_EQ(rep.segments[i].lo, rep.segments[i - 1].hi);
}

TEST(GeometryProperty, NablaPhiIsLinearInVelocity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> Y(-0.7, 0.7), V(0.1, 5);
  const RstuSode sode = Cart{}.sode_d(7 * kG);
  for (int k = 0; k < 200; ++k) {
    const double y = Y(rng), v1 = V(rng), v2 = -V(rng);
    const auto [a1, b1] = nabla_phi(sode, y, v1);
    const auto [a2, b2] = nabla_phi(sode, y, v2);
    EXPECT_NEAR(a1 / v1, a2 / v2, 1e-12 * (1 + std::abs(a1 / v1)));
    EXPECT_NEAR(b1 / v1, b2 / v2, 1e-12 * (1 + std::abs(b1 / v1)));
  }
}

// nabla Phi = Gamma(Phi) + Gamma Phi - Phi Gamma, with Gamma(Phi) = ydot Phi'
// from central differences of the Jacobi components.
TEST(GeometryProperty, NablaPhiMatchesCommutatorForm) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> Y(-0.7, 0.7), V(-3, 3);
  for (const RstuSode& sode : {Cart{}.sode_d(7 * kG), Cart{}.sode_d(3 * kG), Wheel{}.sode()}) {
    for (int k = 0; k < 50; ++k) {
      const double y = Y(rng), v = V(rng), h = 1e-5;
      const auto [p12, p22] = jacobi(sode, y);
      const auto [pp12, pp22] = jacobi(sode, y + h);
      const auto [pm12, pm22] = jacobi(sode, y - h);
      const auto [g12, g22] = connection(sode, y, v);
      const double n12 = v * (pp12 - pm12) / (2 * h) + g12 * p22 - g22 * p12;
      const double n22 = v * (pp22 - pm22) / (2 * h);
      const auto [a, b] = nabla_phi(sode, y, v);
      EXPECT_NEAR(a, n12, 1e-7 * (1 + std::abs(n12)));
      EXPECT_NEAR(b, n22, 1e-7 * (1 + std::abs(n22)));
    }
  }
}

TEST(GeometryProperty, ClassificationStableUnderRefinement) {
  const auto blm = Cart{}.with_kappa(3);
  const std::vector<RstuSode> sodes = {Cart{}.sode_d(7 * kG), Wheel{}.sode(),
                                       to_normal_form(blm.system, *blm.control, Interval{-0.5, 0.5})};
  for (const auto& s : sodes) {
    const DouglasCase coarse = classify(s, 256).overall();
    EXPECT_EQ(classify(s, 512).overall(), coarse);
    EXPECT_EQ(classify(s, 1024).overall(), coarse);
  }
}
