#pragma once

// Control synthesis: solving the rank-1 condition for M, the BLM matching
// control, the stability criterion and the dissipative extra control.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lagstab/system.hpp"
#include "lagstab/variational.hpp"

namespace lagstab {

struct SolvedControl {
  QuadraticControl control;  ///< tabulated M, the given N
  Interval interval;  ///< span of the nodes
  std::vector<double> y;   ///< nodes, ascending, 0 included
  std::vector<double> M;   ///< M at the nodes
  std::vector<double> Mp;  ///< M' at the nodes
  double verification = 0;  ///< max |rank1| / (1 + max sum of |terms|) on a midpoint grid
};

/// Integrates rank1(y, M, M') = 0 outward from y = 0 in both directions with
/// classical RK4 at (at most) the given step; each stage solves the relation
/// for M' by bracketing from the previous value and regula falsi (Illinois)
/// with bisection fallback. M' at y = 0, where the relation degenerates, is
/// the linear extrapolation 2 p(d) - p(2 d) of one-sided solves at d = step/100.
/// M between nodes is the cubic Hermite interpolant. The nodes span the
/// working interval minus a relative margin of 1e-6 at each end, which is
/// the returned `interval`.
SolvedControl solve_M(const MechanicalSystem& sys, const Profile& N, double M0 = 0.0, double step = 1e-3,
                      std::optional<Interval> working = std::nullopt);

/// Matching control with multiplier constant sigma:
///   A22 = a22 - (a12^2/a11)(1 - 1/sigma),
///   M = (1/sigma)(a12' - (a12/A22)(a22'/2 - (1 - 1/sigma)(a12/a11) a12')),
///   N = -(1/sigma)(a12/A22) V'.
/// Throws DenominatorVanishes when A22 vanishes or changes sign on the
/// system's working interval.
QuadraticControl blm_control_sigma(const MechanicalSystem& sys, double sigma);

/// blm_control_sigma with sigma = -1/kappa.
QuadraticControl blm_control(const MechanicalSystem& sys, double kappa);

struct StabilityReport {
  bool equilibrium_ok = false;  ///< S(0) = U(0) = 0 within tolerance
  bool variational = false;
  bool phi22_nonzero = false;   ///< Phi^2_2(0) != 0
  double s0 = 0;
  double u0 = 0;
  double phi22_0 = 0;
  double s_prime_0 = 0;
  bool stable = false;  ///< all of the above and S'(0) < 0
  std::vector<std::string> notes;
};

/// Never throws on domain problems; they become notes and stable = false.
StabilityReport stability_report(const RstuSode& sode, const VariationalityVerdict& verdict, double tol = 1e-9);

/// (box, diamond) = (g11 a^11 + g12 a^12, g12 a^11 + g22 a^12).
std::pair<double, double> dissipative_terms(const MechanicalSystem& sys, const Multiplier& mult, double y);

/// Extra control u2 = f(x, y) (box xdot + diamond ydot) with
/// D = (f/2)(box xdot + diamond ydot)^2, so that dE_L/dt = f (box xdot + diamond ydot)^2.
class DissipativeAugmentation {
 public:
  DissipativeAugmentation(MechanicalSystem sys, Multiplier mult, Expr f);

  const MechanicalSystem& system() const { return sys_; }
  const Multiplier& multiplier() const { return mult_; }
  const Expr& f() const { return f_; }

  std::pair<double, double> terms(double y) const { return dissipative_terms(sys_, mult_, y); }
  double f_at(double x, double y) const { return eval(f_, y, x); }
  double u2(double x, double y, double xdot, double ydot) const;
  double dissipation(double x, double y, double xdot, double ydot) const;
  /// (a^11 u2, a^12 u2): the change in (xddot, yddot).
  std::pair<double, double> acceleration(double x, double y, double xdot, double ydot) const;

 private:
  MechanicalSystem sys_;
  Multiplier mult_;
  Expr f_;
};

/// f is sampled on x in [-10, 10] times the multiplier interval: FNotNegative
/// when f > 0 at a sample or f vanishes at every sample.
DissipativeAugmentation build_dissipative(const MechanicalSystem& sys, const Multiplier& mult, const Expr& f,
                                          int samples = 41);

enum class LaSalleVerdict { AsymptoticallyStable, Inconclusive };

std::string_view to_string(LaSalleVerdict v);

struct LaSalleReport {
  LaSalleVerdict verdict = LaSalleVerdict::Inconclusive;
  bool constant_terms = false;  ///< box and diamond constant on the grid
  double box = 0;               ///< value at 0
  double diamond = 0;           ///< value at 0
  double min_force_ratio = 0;   ///< min over y != 0 of |box U + diamond S| / max of it
  int starts = 0;               ///< reduced-flow starts tried on {box v_x + diamond v_y = 0}
  int invariant_starts = 0;     ///< starts that stayed on that set
  std::string detail;
};

/// Constant box, diamond (relative variation below 1e-10): the equilibrium is
/// asymptotically stable when box T + diamond R vanishes and box U + diamond S
/// is non-zero for every grid y != 0. Otherwise 50 seeded reduced-flow starts
/// on {box v_x + diamond v_y = 0} are followed for 0.5 time units; the verdict
/// stays Inconclusive either way.
LaSalleReport lasalle_check(const RstuSode& sode, const Multiplier& mult, const MechanicalSystem& sys,
                            int grid_points = 256);

}  // namespace lagstab
