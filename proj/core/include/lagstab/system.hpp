#pragma once

#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "lagstab/expr.hpp"
#include "lagstab/jet.hpp"

namespace lagstab {

/// Open interval (lo, hi) of the shape coordinate y.
struct Interval {
  double lo = -std::numbers::pi / 2;
  double hi = std::numbers::pi / 2;

  bool contains(double y) const { return lo < y && y < hi; }
  double width() const { return hi - lo; }
  /// Point i of an n-point midpoint grid: lo + (i + 1/2) (hi - lo) / n.
  double midpoint(int i, int n) const { return lo + (i + 0.5) * width() / n; }
};

/// Scalar function of y that can report three derivatives. Backed either by
/// an expression or by an arbitrary callable (tabulated or assembled data).
class Profile {
 public:
  using Fn = std::function<Jet3(double)>;

  /// Identically zero.
  Profile();
  Profile(Expr e);  // NOLINT(google-explicit-constructor)
  Profile(Fn fn, std::string description);

  Jet3 operator()(double y) const { return fn_(y); }
  const std::optional<Expr>& expr() const { return expr_; }
  std::string describe() const;

 private:
  Fn fn_;
  std::optional<Expr> expr_;
  std::string description_;
};

/// L = 1/2 (a11 xdot^2 + 2 a12(y) xdot ydot + a22(y) ydot^2) - V(y), with x cyclic.
struct MechanicalSystem {
  double a11 = 1.0;
  Expr a12;
  Expr a22 = Expr::constant(1.0);
  Expr V;
  /// Default working interval handed to the normal form.
  Interval working;
};

/// u = M(y) ydot^2 + N(y), acting along dx.
struct QuadraticControl {
  Profile M;
  Profile N;

  double value(double y, double ydot) const { return M(y).value() * ydot * ydot + N(y).value(); }
};

/// xddot = T ydot^2 + U,  yddot = R ydot^2 + S, each with two y-derivatives.
struct SodeCoefficients {
  Jet2 T;
  Jet2 U;
  Jet2 R;
  Jet2 S;
};

/// Entries a^11, a^12, a^22 of the inverse kinetic metric.
struct InverseMetric {
  Jet2 i11;
  Jet2 i12;
  Jet2 i22;
};

InverseMetric inverse_metric(const MechanicalSystem& sys, double y);

/// Normal-form coefficients at y for given control jets.
SodeCoefficients normal_form_at(const MechanicalSystem& sys, double y, const Jet2& M, const Jet2& N);

class RstuSode {
 public:
  using CoefficientFn = std::function<SodeCoefficients(double)>;

  /// A SODE given directly by its coefficient functions (no mechanical source).
  RstuSode(CoefficientFn fn, Interval working);

  SodeCoefficients operator()(double y) const { return fn_(y); }
  const Interval& working_interval() const { return working_; }

  /// Source system and control, present when built by to_normal_form().
  const MechanicalSystem* system() const { return source_ ? &source_->system : nullptr; }
  const QuadraticControl* control() const { return source_ ? &source_->control : nullptr; }

  RstuSode with_interval(Interval working) const;

 private:
  struct Source {
    MechanicalSystem system;
    QuadraticControl control;
  };
  friend RstuSode to_normal_form(const MechanicalSystem&, const QuadraticControl&, std::optional<Interval>);

  CoefficientFn fn_;
  Interval working_;
  std::shared_ptr<const Source> source_;
};

/// Throws InvalidParameter when a11 == 0 and SingularMetric when det(a)
/// vanishes or changes sign on the working interval.
RstuSode to_normal_form(const MechanicalSystem& sys, const QuadraticControl& u,
                        std::optional<Interval> working = std::nullopt);

/// a11 = a22 = 1, a12 = V = 0.
MechanicalSystem free_system();

struct BuiltinSystem {
  std::string name;
  MechanicalSystem system;
  std::optional<QuadraticControl> control;
  std::string control_name;  ///< "new", "blm", "sine" or empty
  ParameterMap params;       ///< user parameters plus derived constants
};

/// Named systems with optional closed-form controls.
///
/// cart-pendulum: M_cart, m, l, g (alpha = m l^2, beta = m l, gamma = M_cart + m,
///   delta = -m g l; x = s, y = phi). Adding `d` selects the N = d cos sin
///   control, adding `kappa` selects the BLM control.
/// inertia-wheel: a, b, m with a > b > 0 (x = wheel angle, y = pendulum
///   angle). Adding `d1` selects N = d1 sin(y), M = 0.
BuiltinSystem builtin(std::string_view name, const ParameterMap& params);

}  // namespace lagstab
