#pragma once

// Shared systems and closed-form oracles for the test suites.

#include <cmath>
#include <random>

#include <lagstab/lagstab.hpp>

namespace fixtures {

inline constexpr double kG = 9.81;

// Inertia wheel pendulum, a = 0.4846, b = 0.0032, m = 37.98.
struct Wheel {
  double a = 0.4846, b = 0.0032, m = 37.98, d1 = 60;

  lagstab::BuiltinSystem builtin() const {
    return lagstab::builtin("inertia-wheel", {{"a", a}, {"b", b}, {"m", m}, {"d1", d1}});
  }
  lagstab::RstuSode sode() const {
    const auto bs = builtin();
    return lagstab::to_normal_form(bs.system, *bs.control);
  }
  double S(double y) const { return (m - d1) * std::sin(y) / (a - b); }
  double U(double y) const { return (-a * d1 + b * m) * std::sin(y) / (b * (b - a)); }
  double nu() const { return -(a * d1 - b * m) / (b * d1 - b * m); }
};

// Cart with pendulum, M = 2, m = 1, l = 1: alpha = 1, beta = 1, gamma = 3, delta = -g.
struct Cart {
  double alpha = 1, beta = 1, gamma = 3, delta = -kG;

  static lagstab::ParameterMap params() { return {{"M_cart", 2}, {"m", 1}, {"l", 1}, {"g", kG}}; }

  lagstab::BuiltinSystem with_d(double d) const {
    auto p = params();
    p["d"] = d;
    return lagstab::builtin("cart-pendulum", p);
  }
  lagstab::BuiltinSystem with_kappa(double kappa) const {
    auto p = params();
    p["kappa"] = kappa;
    return lagstab::builtin("cart-pendulum", p);
  }
  lagstab::RstuSode sode_d(double d) const {
    const auto bs = with_d(d);
    return lagstab::to_normal_form(bs.system, *bs.control);
  }

  double den(double y) const { return alpha * gamma - beta * beta * std::cos(y) * std::cos(y); }
  double q(double d, double y) const { return 2 * gamma * delta + beta * d + beta * d * std::cos(2 * y); }

  // Closed-form M of the N = d cos sin control.
  double M(double d, double y) const {
    const double b = beta, al = alpha, ga = gamma, de = delta;
    return -d * (2 * b * b * de - 2 * al * ga * de + al * b * d + b * (2 * b * de + al * d) * std::cos(2 * y)) *
           std::sin(y) / (de * q(d, y));
  }
  double T(double d, double y) const {
    const double b = beta, al = alpha, ga = gamma, de = delta;
    return (al * b / den(y) -
            al * d * (2 * b * b * de - 2 * al * ga * de + al * b * d + b * (2 * b * de + al * d) * std::cos(2 * y)) /
                (de * q(d, y) * den(y))) *
           std::sin(y);
  }
  double U(double d, double y) const {
    return (beta * delta + alpha * d) * std::cos(y) * std::sin(y) / den(y);
  }
  double R(double d, double y) const {
    const double b = beta, ga = gamma, de = delta;
    return b * (b * de + alpha * d) * (-2 * ga * de + b * d + b * d * std::cos(2 * y)) * std::cos(y) * std::sin(y) /
           (de * den(y) * q(d, y));
  }
  double S(double d, double y) const { return -q(d, y) * std::sin(y) / (2 * den(y)); }
  double nu(double d, double y) const { return -2 * (beta * delta + alpha * d) * std::cos(y) / q(d, y); }
  // rho2 up to its constant factor.
  double rho2_shape(double d, double y) const {
    const double base = beta * beta - 2 * alpha * gamma + beta * beta * std::cos(2 * y);
    return std::pow(base, 1 - alpha * d / (beta * delta)) / (q(d, y) * q(d, y));
  }
};

inline lagstab::MechanicalSystem custom(const char* a12, const char* a22, const char* V, double a11 = 1) {
  lagstab::MechanicalSystem s;
  s.a11 = a11;
  s.a12 = lagstab::parse(a12);
  s.a22 = lagstab::parse(a22);
  s.V = lagstab::parse(V);
  return s;
}

inline lagstab::RstuSode free_sode() { return lagstab::to_normal_form(lagstab::free_system(), {}); }

}  // namespace fixtures
