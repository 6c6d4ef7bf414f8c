#include "lagstab/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lagstab/error.hpp"

namespace lagstab {

namespace {

int step_count(double t_end, double h) {
  if (!(h > 0) || !std::isfinite(h)) throw InvalidParameter("step h must be positive");
  if (!(t_end >= 0) || !std::isfinite(t_end)) throw InvalidParameter("t_end must be non-negative");
  return static_cast<int>(std::floor(t_end / h + 1e-9));
}

template <std::size_t D, class Rhs>
std::array<double, D> rk4_step(const std::array<double, D>& s, double h, Rhs&& rhs) {
  const auto k1 = rhs(s);
  std::array<double, D> t;
  for (std::size_t j = 0; j < D; ++j) t[j] = s[j] + 0.5 * h * k1[j];
  const auto k2 = rhs(t);
  for (std::size_t j = 0; j < D; ++j) t[j] = s[j] + 0.5 * h * k2[j];
  const auto k3 = rhs(t);
  for (std::size_t j = 0; j < D; ++j) t[j] = s[j] + h * k3[j];
  const auto k4 = rhs(t);
  std::array<double, D> out;
  for (std::size_t j = 0; j < D; ++j) out[j] = s[j] + h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  return out;
}

template <std::size_t D>
bool all_finite(const std::array<double, D>& s) {
  for (double v : s)
    if (!std::isfinite(v)) return false;
  return true;
}

double control_value(const RstuSode& sode, double y, double ydot) {
  const QuadraticControl* u = sode.control();
  return u ? u->value(y, ydot) : 0.0;
}

}  // namespace

Trajectory integrate_full(const RstuSode& sode, const DissipativeAugmentation* aug, FullState s0, double t_end,
                          double h, const Multiplier* mult) {
  const int n = step_count(t_end, h);
  const Interval& iv = sode.working_interval();
  if (!mult && aug) mult = &aug->multiplier();
  double t = 0;
  if (!iv.contains(s0.y)) throw LeftWorkingInterval(0.0, s0.y);

  auto rhs = [&](const std::array<double, 4>& s) {
    if (!iv.contains(s[1])) throw LeftWorkingInterval(t, s[1]);
    const SodeCoefficients c = sode(s[1]);
    const double v = s[3];
    std::array<double, 4> d = {s[2], v, c.T.value() * v * v + c.U.value(), c.R.value() * v * v + c.S.value()};
    if (aug) {
      const auto [ax, ay] = aug->acceleration(s[0], s[1], s[2], s[3]);
      d[2] += ax;
      d[3] += ay;
    }
    return d;
  };

  Trajectory tr;
  tr.h = h;
  auto record = [&](const std::array<double, 4>& s) {
    tr.t.push_back(t);
    tr.x.push_back(s[0]);
    tr.y.push_back(s[1]);
    tr.xdot.push_back(s[2]);
    tr.ydot.push_back(s[3]);
    tr.u.push_back(control_value(sode, s[1], s[3]));
    tr.u2.push_back(aug ? aug->u2(s[0], s[1], s[2], s[3]) : 0.0);
    if (mult) tr.energy.push_back(mult->energy(s[1], s[2], s[3]));
  };

  std::array<double, 4> s = {s0.x, s0.y, s0.xdot, s0.ydot};
  record(s);
  for (int k = 0; k < n; ++k) {
    s = rk4_step(s, h, rhs);
    t = (k + 1) * h;
    if (!all_finite(s)) throw NonFiniteState(t);
    if (!iv.contains(s[1])) throw LeftWorkingInterval(t, s[1]);
    record(s);
  }
  return tr;
}

Trajectory integrate_reduced(const RstuSode& sode, ReducedState s0, double t_end, double h, const Multiplier* mult) {
  const int n = step_count(t_end, h);
  const Interval& iv = sode.working_interval();
  double t = 0;
  if (!iv.contains(s0.y)) throw LeftWorkingInterval(0.0, s0.y);

  auto rhs = [&](const std::array<double, 3>& s) {
    if (!iv.contains(s[0])) throw LeftWorkingInterval(t, s[0]);
    const SodeCoefficients c = sode(s[0]);
    const double v = s[1];
    return std::array<double, 3>{v, c.R.value() * v * v + c.S.value(), c.T.value() * v * v + c.U.value()};
  };

  Trajectory tr;
  tr.reduced = true;
  tr.h = h;
  auto record = [&](const std::array<double, 3>& s) {
    tr.t.push_back(t);
    tr.y.push_back(s[0]);
    tr.ydot.push_back(s[1]);
    tr.xdot.push_back(s[2]);
    tr.u.push_back(control_value(sode, s[0], s[1]));
    tr.u2.push_back(0.0);
    if (mult) tr.energy.push_back(mult->energy(s[0], s[2], s[1]));
  };

  std::array<double, 3> s = {s0.y, s0.vy, s0.vx};
  record(s);
  for (int k = 0; k < n; ++k) {
    s = rk4_step(s, h, rhs);
    t = (k + 1) * h;
    if (!all_finite(s)) throw NonFiniteState(t);
    if (!iv.contains(s[0])) throw LeftWorkingInterval(t, s[0]);
    record(s);
  }
  return tr;
}

EnergyMonitor monitor_energy(const Trajectory& traj, const Multiplier& mult) {
  EnergyMonitor m;
  m.series.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) m.series.push_back(mult.energy(traj.y[k], traj.xdot[k], traj.ydot[k]));
  if (m.series.empty()) return m;
  const double e0 = m.series.front();
  const double slack = 1e-9 * (1 + std::abs(e0));
  for (std::size_t k = 0; k < m.series.size(); ++k) {
    m.max_drift = std::max(m.max_drift, std::abs(m.series[k] - e0));
    if (k > 0 && m.series[k] > m.series[k - 1] + slack) m.monotone = false;
  }
  return m;
}

}  // namespace lagstab
