#include "lagstab/error.hpp"

#include <cstdio>

namespace lagstab {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t position, std::string expected, const std::string& detail)
    : Error("syntax error at position " + std::to_string(position) + ": expected " + expected +
            (detail.empty() ? std::string{} : " (" + detail + ")")),
      position_(position),
      expected_(std::move(expected)) {}

UnboundParameter::UnboundParameter(std::string name)
    : Error("unbound parameter $" + name), name_(std::move(name)) {}

DomainError::DomainError(std::string what, double y)
    : Error(std::move(what) + " at y=" + num(y)), y_(y) {}

SingularMetric::SingularMetric(double y)
    : DomainError("kinetic metric is singular (a11*a22 - a12^2 = 0)", y) {}

UnknownBuiltin::UnknownBuiltin(const std::string& name) : Error("unknown builtin system '" + name + "'") {}

MissingParameter::MissingParameter(const std::string& builtin, const std::string& name)
    : Error("builtin '" + builtin + "' requires parameter '" + name + "'") {}

Phi22Vanishes::Phi22Vanishes(double y) : DomainError("Phi^2_2 vanishes", y) {}

QuadratureFailure::QuadratureFailure(double a, double b)
    : Error("adaptive quadrature did not converge on [" + num(a) + ", " + num(b) + "]") {}

EquilibriumMissing::EquilibriumMissing(double s0, double u0)
    : Error("y=0 is not an equilibrium: S(0)=" + num(s0) + ", U(0)=" + num(u0)) {}

RootFindFailure::RootFindFailure(double y) : DomainError("no bracket for M' in the rank-1 relation", y) {}

SingularAtEquilibrium::SingularAtEquilibrium()
    : Error("coefficient of M' vanishes at the equilibrium and no one-sided start succeeded") {}

DenominatorVanishes::DenominatorVanishes(double y) : DomainError("control denominator vanishes", y) {}

FNotNegative::FNotNegative(double x, double y, double value)
    : Error("dissipation factor f must be non-positive, got f(" + num(x) + ", " + num(y) + ") = " + num(value)),
      x_(x),
      y_(y) {}

LeftWorkingInterval::LeftWorkingInterval(double t, double y)
    : Error("trajectory left the working interval at t=" + num(t) + " (y=" + num(y) + ")"), t_(t) {}

NonFiniteState::NonFiniteState(double t) : Error("non-finite state at t=" + num(t)), t_(t) {}

}  // namespace lagstab
