#pragma once

// Fixed-step RK4 integration of the full (x, y, xdot, ydot) and reduced
// (y, v_y, v_x) controlled flows.

#include <cstddef>
#include <vector>

#include "lagstab/synth.hpp"
#include "lagstab/system.hpp"
#include "lagstab/variational.hpp"

namespace lagstab {

struct FullState {
  double x = 0, y = 0, xdot = 0, ydot = 0;
};

struct ReducedState {
  double y = 0, vy = 0, vx = 0;
};

/// Column-major samples. For reduced runs `x` is empty and xdot, ydot hold
/// v_x, v_y. `energy` is empty without a multiplier; `u` is zero when the
/// SODE has no control source; `u2` is zero without an augmentation.
struct Trajectory {
  bool reduced = false;
  double h = 0;
  std::vector<double> t, x, y, xdot, ydot, energy, u, u2;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
};

/// xddot = T ydot^2 + U + a^11 u2,  yddot = R ydot^2 + S + a^12 u2.
/// Runs floor(t_end / h) steps. Throws LeftWorkingInterval when y leaves the
/// working interval (at a stage or a step) and NonFiniteState on overflow.
/// When `mult` is null and `aug` is given, the augmentation's multiplier
/// feeds the energy channel.
Trajectory integrate_full(const RstuSode& sode, const DissipativeAugmentation* aug, FullState s0, double t_end,
                          double h, const Multiplier* mult = nullptr);

/// ydot = v_y, v_y' = R v_y^2 + S, v_x' = T v_y^2 + U.
Trajectory integrate_reduced(const RstuSode& sode, ReducedState s0, double t_end, double h,
                             const Multiplier* mult = nullptr);

struct EnergyMonitor {
  std::vector<double> series;
  double max_drift = 0;  ///< max |E(t) - E(0)|
  bool monotone = true;  ///< E(t_{k+1}) <= E(t_k) + 1e-9 (1 + |E(0)|) for every k
};

EnergyMonitor monitor_energy(const Trajectory& traj, const Multiplier& mult);

}  // namespace lagstab
