#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fixtures.hpp"

using namespace lagstab;

namespace {

double final_error(const Trajectory& a, const Trajectory& b) {
  const std::size_t i = a.size() - 1, j = b.size() - 1;
  return std::max({std::abs(a.x[i] - b.x[j]), std::abs(a.y[i] - b.y[j]), std::abs(a.xdot[i] - b.xdot[j]),
                   std::abs(a.ydot[i] - b.ydot[j])});
}

}  // namespace

TEST(Sim, FreeMotionIsExact) {
  const auto tr = integrate_full(fixtures::free_sode(), nullptr, {0, 0, 1, 0}, 1.0, 1e-2);
  ASSERT_EQ(tr.size(), 101u);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    EXPECT_NEAR(tr.x[k], tr.t[k], 1e-14);
    EXPECT_EQ(tr.y[k], 0.0);
    EXPECT_EQ(tr.xdot[k], 1.0);
    EXPECT_EQ(tr.u[k], 0.0);
    EXPECT_EQ(tr.u2[k], 0.0);
  }
  EXPECT_TRUE(tr.energy.empty());
}

TEST(Sim, TimesStrictlyIncreaseWithConstantStep) {
  const fixtures::Wheel w;
  const auto tr = integrate_full(w.sode(), nullptr, {0.1, 1e-4, 0.1, 1e-4}, 2.0, 1e-3);
  ASSERT_EQ(tr.size(), 2001u);
  EXPECT_EQ(tr.t.front(), 0.0);
  for (std::size_t k = 1; k < tr.size(); ++k) {
    EXPECT_GT(tr.t[k], tr.t[k - 1]);
    EXPECT_NEAR(tr.t[k] - tr.t[k - 1], 1e-3, 1e-15);
  }
}

TEST(Sim, EquilibriumStaysPut) {
  const fixtures::Wheel w;
  const auto sode = w.sode();
  const auto mult = build_multiplier(sode);
  const auto tr = integrate_reduced(sode, {0, 0, 0}, 5.0, 1e-2, &mult);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    EXPECT_EQ(tr.y[k], 0.0);
    EXPECT_EQ(tr.ydot[k], 0.0);
    EXPECT_EQ(tr.xdot[k], 0.0);
    EXPECT_EQ(tr.u[k], 0.0);
  }
  const auto mon = monitor_energy(tr, mult);
  for (double e : mon.series) EXPECT_EQ(e, 0.0);
  EXPECT_EQ(mon.max_drift, 0.0);
  EXPECT_TRUE(mon.monotone);
  EXPECT_TRUE(tr.x.empty());
}

TEST(Sim, ControlChannelRecordsFeedback) {
  const fixtures::Cart c;
  const double d = 7 * fixtures::kG;
  const auto sode = c.sode_d(d);
  const auto tr = integrate_full(sode, nullptr, {0, 0.4, -1.5, 0.1}, 0.5, 1e-3);
  for (std::size_t k = 0; k < tr.size(); k += 50) {
    const double y = tr.y[k], v = tr.ydot[k];
    EXPECT_NEAR(tr.u[k], c.M(d, y) * v * v + d * std::cos(y) * std::sin(y), 1e-10);
  }
}

TEST(Sim, ReducedMatchesFullWheel) {
  const fixtures::Wheel w;
  const auto sode = w.sode();
  const auto full = integrate_full(sode, nullptr, {0.1, 1e-4, 0.1, 1e-4}, 10.0, 1e-3);
  const auto red = integrate_reduced(sode, {1e-4, 1e-4, 0.1}, 10.0, 1e-3);
  ASSERT_EQ(full.size(), red.size());
  for (std::size_t k = 0; k < full.size(); ++k) {
    EXPECT_NEAR(full.y[k], red.y[k], 1e-9);
    EXPECT_NEAR(full.ydot[k], red.ydot[k], 1e-9);
    EXPECT_NEAR(full.xdot[k], red.xdot[k], 1e-9);
  }
}

TEST(Sim, ReducedMatchesFullCart) {
  const fixtures::Cart c;
  const auto sode = c.sode_d(7 * fixtures::kG);
  const auto full = integrate_full(sode, nullptr, {0, 0.4, -1.5, 0.1}, 10.0, 1e-3);
  const auto red = integrate_reduced(sode, {0.4, 0.1, -1.5}, 10.0, 1e-3);
  ASSERT_EQ(full.size(), red.size());
  double worst = 0;
  for (std::size_t k = 0; k < full.size(); ++k)
    worst = std::max({worst, std::abs(full.y[k] - red.y[k]), std::abs(full.ydot[k] - red.ydot[k]),
                      std::abs(full.xdot[k] - red.xdot[k])});
  EXPECT_LE(worst, 1e-9);
}

TEST(Sim, CartStaysInsideWorkingInterval) {
  const fixtures::Cart c;
  const auto tr = integrate_full(c.sode_d(7 * fixtures::kG), nullptr, {0, 0.4, -1.5, 0.1}, 20.0, 1e-3);
  double peak = 0;
  for (double y : tr.y) peak = std::max(peak, std::abs(y));
  EXPECT_LT(peak, std::numbers::pi / 4);
  EXPECT_GT(peak, 0.39);
}

TEST(Sim, FourthOrderConvergence) {
  const fixtures::Cart c;
  const auto sode = c.sode_d(7 * fixtures::kG);
  const FullState s0{0, 0.4, -1.5, 0.1};
  const double t_end = 5.0, h = 0.02;
  const auto coarse = integrate_full(sode, nullptr, s0, t_end, h);
  const auto fine = integrate_full(sode, nullptr, s0, t_end, h / 2);
  const auto ref = integrate_full(sode, nullptr, s0, t_end, h / 16);
  const double ratio = final_error(coarse, ref) / final_error(fine, ref);
  EXPECT_GE(ratio, 10.0);
  EXPECT_LE(ratio, 24.0);
}

TEST(Sim, EnergyDriftWheelAndCart) {
  const fixtures::Wheel w;
  const auto ws = w.sode();
  const auto wm = build_multiplier(ws);
  const auto wt = integrate_full(ws, nullptr, {0.1, 1e-4, 0.1, 1e-4}, 20.0, 1e-3, &wm);
  EXPECT_LE(monitor_energy(wt, wm).max_drift, 1e-6);
  EXPECT_EQ(wt.energy.size(), wt.size());

  const fixtures::Cart c;
  const auto cs = c.sode_d(7 * fixtures::kG);
  const auto cm = build_multiplier(cs);
  const auto ct = integrate_full(cs, nullptr, {0, 0.4, -1.5, 0.1}, 20.0, 1e-3, &cm);
  EXPECT_LE(monitor_energy(ct, cm).max_drift, 1e-6);
}

TEST(Sim, EnergyDriftShrinksWithStep) {
  const fixtures::Cart c;
  const auto sode = c.sode_d(7 * fixtures::kG);
  const auto mult = build_multiplier(sode);
  const FullState s0{0, 0.4, -1.5, 0.1};
  const double d1 = monitor_energy(integrate_full(sode, nullptr, s0, 5.0, 0.02), mult).max_drift;
  const double d2 = monitor_energy(integrate_full(sode, nullptr, s0, 5.0, 0.01), mult).max_drift;
  EXPECT_GE(d1 / d2, 10.0);
  EXPECT_LE(d1 / d2, 24.0);
}

TEST(Sim, DissipativeWheelRunDecays) {
  const fixtures::Wheel w;
  const auto sode = w.sode();
  const double nu0 = w.nu();
  const auto mult = build_multiplier(sode, {.A = nu0 * nu0});
  const auto aug = build_dissipative(w.builtin().system, mult, parse("-0.1/$nu0^2", {{"nu0", nu0}}));
  const auto tr = integrate_full(sode, &aug, {0.1, 1e-4, 0.1, 1e-4}, 30.0, 1e-3);
  const auto mon = monitor_energy(tr, mult);
  EXPECT_TRUE(mon.monotone);
  for (std::size_t k = 1; k < mon.series.size(); ++k) EXPECT_LE(mon.series[k], mon.series[k - 1] + 1e-9);
  EXPECT_LT(mon.series.back(), 0.1 * mon.series.front());
  EXPECT_EQ(tr.energy, mon.series);
}

TEST(Sim, DissipativeCartRunIsMonotone) {
  const fixtures::Cart c;
  const double d = 7 * fixtures::kG;
  const auto sode = c.sode_d(d);
  const auto mult = build_multiplier(sode);
  const auto aug = build_dissipative(c.with_d(d).system, mult, parse("-0.03*x^2"));
  const auto tr = integrate_full(sode, &aug, {0, 0.4, -1.5, 0.1}, 20.0, 1e-3);
  EXPECT_TRUE(monitor_energy(tr, mult).monotone);
  bool any = false;
  for (double u2 : tr.u2) any = any || u2 != 0.0;
  EXPECT_TRUE(any);
}

TEST(Sim, LeavingTheIntervalStops) {
  const fixtures::Cart c;
  const auto sode = c.sode_d(7 * fixtures::kG);
  try {
    integrate_full(sode, nullptr, {0, 0.4, 0, 30}, 5.0, 1e-3);
    FAIL() << "expected LeftWorkingInterval";
  } catch (const LeftWorkingInterval& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 0.1);
  }
  EXPECT_THROW(integrate_reduced(sode, {1.0, 0, 0}, 1.0, 1e-3), LeftWorkingInterval);
}

TEST(Sim, OverflowIsReported) {
  const RstuSode blowup(
      [](double) {
        SodeCoefficients c;
        c.T = Jet2(1.0);
        c.S = Jet2(1e300);
        return c;
      },
      Interval{-std::numeric_limits<double>::max(), std::numeric_limits<double>::max()});
  EXPECT_THROW(integrate_full(blowup, nullptr, {0, 0, 0, 0}, 10.0, 1.0), NonFiniteState);
}

TEST(Sim, RejectsBadStep) {
  const auto sode = fixtures::free_sode();
  EXPECT_THROW(integrate_full(sode, nullptr, {}, 1.0, 0.0), InvalidParameter);
  EXPECT_THROW(integrate_full(sode, nullptr, {}, -1.0, 0.1), InvalidParameter);
  EXPECT_THROW(integrate_reduced(sode, {}, 1.0, std::nan("")), InvalidParameter);
}
