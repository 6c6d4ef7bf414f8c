#pragma once

// Connection, Jacobi endomorphism and dynamical covariant derivative of the
// normal-form SODE, plus the Douglas case split used to decide variationality.
//
// Only the second columns are non-trivial: with x cyclic, Gamma^i_1 = 0 and
// Phi^i_1 = 0, so the Jacobi endomorphism has eigenvalues 0 and Phi^2_2.

#include <string_view>
#include <utility>
#include <vector>

#include "lagstab/system.hpp"

namespace lagstab {

struct GeometrySample {
  double y = 0;
  double ydot = 0;
  double Gamma12 = 0;
  double Gamma22 = 0;
  double Phi12 = 0;
  double Phi22 = 0;
  double nablaPhi12 = 0;
  double nablaPhi22 = 0;
  double haantjes = 0;
};

/// (Gamma^1_2, Gamma^2_2) = (-T ydot, -R ydot).
std::pair<double, double> connection(const RstuSode& sode, double y, double ydot);

/// (Phi^1_2, Phi^2_2) = (-U' + S T, -S' + R S).
std::pair<double, double> jacobi(const RstuSode& sode, double y);

/// Jacobi components as jets in y (one derivative), used by nu and the
/// variationality criteria.
std::pair<Jet1, Jet1> jacobi_jets(const SodeCoefficients& c);

/// ydot-coefficients of nabla Phi: (2S'T + ST' - U'' - RU', SR' + RS' - S'').
std::pair<double, double> nabla_phi_coefficients(const SodeCoefficients& c);

/// ((nabla Phi)^1_2, (nabla Phi)^2_2) at (y, ydot).
std::pair<double, double> nabla_phi(const RstuSode& sode, double y, double ydot);

/// Phi^2_2 (Phi^2_2 dPhi^1_2/dydot - Phi^1_2 dPhi^2_2/dydot), with the Jacobi
/// components built from the full velocity-dependent formula. Vanishes for
/// every normal-form SODE; reported to confirm it.
double haantjes_component(const RstuSode& sode, double y);

GeometrySample sample(const RstuSode& sode, double y, double ydot);

enum class DouglasCase { CaseI, CaseIIa1, CaseIIa2, CaseIIb1prime, CaseIIIb, Indeterminate };

std::string_view to_string(DouglasCase c);

struct DouglasSegment {
  double lo = 0;
  double hi = 0;
  DouglasCase verdict = DouglasCase::Indeterminate;
  int first = 0;  ///< first grid index in the run
  int last = 0;   ///< last grid index in the run (inclusive)
};

struct DouglasReport {
  Interval interval;
  std::vector<DouglasSegment> segments;
  double zero_tol = 0;   ///< relative tolerance requested
  double phi_tol = 0;    ///< absolute threshold applied to |Phi|
  double disc_tol = 0;   ///< absolute threshold applied to the Case II discriminant
  std::vector<GeometrySample> samples;  ///< one per grid point, at ydot = 1

  /// The single verdict if every segment agrees, else Indeterminate.
  DouglasCase overall() const;
};

/// Midpoint grid of `grid_points` points on the working interval. A point is
/// Case I when both Phi components are below phi_tol = max(zero_tol max|Phi|,
/// 1e-12). Otherwise the discriminant k1 Phi^2_2 - k2 Phi^1_2 (k = ydot
/// coefficients of nabla Phi) decides: at most disc_tol gives Case II, above
/// 100 disc_tol gives Case IIIb, in between Indeterminate, with disc_tol =
/// max(zero_tol max (|k1| + |k2|)(|Phi^1_2| + |Phi^2_2|), 1e-12). Case II splits into
/// IIa1/IIa2 (Phi^2_2 != 0, Haantjes zero or not) and IIb1' (Phi^2_2 = 0).
/// Segments are maximal runs of one verdict and one sign of Phi^2_2.
DouglasReport classify(const RstuSode& sode, int grid_points = 256, double zero_tol = 1e-9);

}  // namespace lagstab
