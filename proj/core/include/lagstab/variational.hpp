#pragma once

// Variationality of the normal-form SODE and the multiplier
//
//   g = rho1 (dx - nu dy)^2 + rho2(y) dy^2,   nu = Phi^1_2 / Phi^2_2,
//   rho2(y) = A exp(-2 int_0^y R),            V(y) = -int_0^y rho2 S,
//
// whose Lagrangian L = 1/2 g(qdot, qdot) - V reproduces the SODE.

#include <memory>
#include <vector>

#include "lagstab/geometry.hpp"
#include "lagstab/quadrature.hpp"
#include "lagstab/system.hpp"

namespace lagstab {

struct Rank1Terms {
  double value = 0;  ///< left-hand side of the rank-1 condition
  double scale = 0;  ///< sum of the absolute values of its terms
};

Rank1Terms rank1_terms(const SodeCoefficients& c);

/// 2T S'^2 + S^2(T R' - R T') - 2R S' U' + U' S'' - S' U''
///   + S [S' T' + R^2 U' - R' U' - T S'' + R(-T S' + U'')].
double rank1_residual(const RstuSode& sode, double y);

/// nu = Phi^1_2 / Phi^2_2 with its first derivative. Throws Phi22Vanishes
/// when |Phi^2_2| <= zero_tol.
Jet1 nu_jet(const SodeCoefficients& c, double y, double zero_tol = 1e-12);
double nu(const RstuSode& sode, double y, double zero_tol = 1e-12);

enum class VariationalBranch { Phi22Zero, EquivalentCriteria };

/// Grid maxima of the three equivalent criteria, each divided by the largest
/// magnitude of its own terms:
///   rank1,  (U - nu S)' = 0,  nu' = T - R nu.
/// Grid points where |Phi^2_2| <= phi_tol are skipped for the last two.
struct CriteriaResiduals {
  double rank1 = 0;
  double potential = 0;
  double nu_ode = 0;
  double min_abs_phi22 = 0;
  int skipped = 0;
};

CriteriaResiduals criteria_residuals(const RstuSode& sode, int grid_points, double phi_tol = 1e-12);

struct VariationalityVerdict {
  bool is_variational = false;
  VariationalBranch branch = VariationalBranch::EquivalentCriteria;
  double rank1_max_residual = 0;
  double potential_residual = 0;  ///< (U - nu S)'
  double nu_residual = 0;         ///< nu' - (T - R nu)
  double min_abs_phi22 = 0;
  double tol = 0;
  int grid_points = 0;
};

/// Phi22Zero branch when |Phi^2_2| < tol at every grid point (always
/// variational); otherwise all three criteria must agree. Throws
/// InconsistentCriteria when some pass and another exceeds 10 tol.
VariationalityVerdict variational_check(const RstuSode& sode, int grid_points = 256, double tol = 1e-9);

struct MultiplierOptions {
  double A = 1.0;           ///< rho2(0)
  double rho1 = 0.0;        ///< 0 selects sign(A)
  double quad_tol = 1e-10;  ///< Simpson tolerance over the interval (relative to |A| for V)
  int cells = 4096;         ///< interpolation cells of the quadrature table
};

/// Multiplier with rho2 and V tabulated once at construction; immutable and
/// safe to share across threads afterwards.
class Multiplier {
 public:
  double A() const;
  double rho1() const;
  /// Interval covered by the quadrature table.
  const Interval& interval() const;
  const RstuSode& sode() const;

  Jet1 nu(double y) const;
  Jet2 rho2(double y) const;
  /// V and its first two derivatives.
  Jet2 potential(double y) const;

  double g11() const { return rho1(); }
  double g12(double y) const;
  double g22(double y) const;

  /// E_L = 1/2 (g11 xdot^2 + 2 g12 xdot ydot + g22 ydot^2) + V(y).
  double energy(double y, double xdot, double ydot) const;

 private:
  struct Impl;
  explicit Multiplier(std::shared_ptr<const Impl> impl);
  friend Multiplier build_multiplier(const RstuSode&, const MultiplierOptions&);
  std::shared_ptr<const Impl> impl_;
};

/// Requires 0 inside the working interval and Phi^2_2 of one strict sign on
/// it (Phi22Vanishes otherwise). The table spans the working interval minus a
/// relative margin of 1e-6 at each end.
Multiplier build_multiplier(const RstuSode& sode, const MultiplierOptions& opts = {});

inline double energy(const Multiplier& mult, double y, double xdot, double ydot) {
  return mult.energy(y, xdot, ydot);
}

struct PotentialChecks {
  double v_prime_0 = 0;        ///< finite-difference V'(0)
  double v_second_0 = 0;       ///< finite-difference V''(0)
  double expected_second = 0;  ///< -rho2(0) S'(0)
  double s_prime_0 = 0;
};

/// Richardson-extrapolated central differences of the tabulated V at 0.
/// Throws EquilibriumMissing unless S(0) = U(0) = 0 within tol.
PotentialChecks potential_checks(const Multiplier& mult, const RstuSode& sode, double tol = 1e-9);

struct HelmholtzResidual {
  double nabla_g = 0;       ///< worst |(nabla g)_ij|
  double phi_symmetry = 0;  ///< |g(Phi., .) - g(., Phi.)|
  double dv_symmetry = 0;   ///< velocity dependence of g; zero by construction
  double max() const;
};

/// Coordinate components of nabla g, with rho2' the derivative of the
/// tabulated rho2 (not the value -2 R rho2 it is built to satisfy):
///   (nabla g)_12 = rho1 ydot (T - R nu - nu'),
///   (nabla g)_22 = ydot (2 rho1 nu (nu' - T + R nu) + rho2' + 2 R rho2).
HelmholtzResidual helmholtz_residual(const RstuSode& sode, const Multiplier& mult, double y, double ydot);

}  // namespace lagstab
