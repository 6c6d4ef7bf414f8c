#pragma once

// Truncated Taylor jets in one variable.
//
// A Jet<N> carries f(y0), f'(y0), ..., f^(N)(y0). Internally the normalized
// Taylor coefficients f^(k)(y0)/k! are stored, which keeps products a plain
// Cauchy convolution and lets every elementary function be applied through one
// composition routine.

#include <array>
#include <cmath>
#include <cstddef>

namespace lagstab {

template <int N>
class Jet {
  static_assert(N >= 0 && N <= 8, "jet order out of range");

 public:
  static constexpr int order = N;
  using Coefficients = std::array<double, N + 1>;

  constexpr Jet() = default;
  // Implicit on purpose: constants mix freely with jets.
  constexpr Jet(double c) { t_[0] = c; }  // NOLINT(google-explicit-constructor)

  /// Seed for the independent variable: y0 + (y - y0).
  static constexpr Jet variable(double y0) {
    Jet j(y0);
    if constexpr (N >= 1) j.t_[1] = 1.0;
    return j;
  }

  static constexpr Jet from_taylor(const Coefficients& t) {
    Jet j;
    j.t_ = t;
    return j;
  }

  static constexpr Jet from_derivatives(const Coefficients& d) {
    Jet j;
    double fact = 1.0;
    for (int k = 0; k <= N; ++k) {
      if (k > 0) fact *= k;
      j.t_[k] = d[k] / fact;
    }
    return j;
  }

  constexpr double value() const { return t_[0]; }
  constexpr double taylor(int k) const { return t_[static_cast<std::size_t>(k)]; }
  constexpr double derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return t_[static_cast<std::size_t>(k)] * fact;
  }
  constexpr double d1() const requires(N >= 1) { return t_[1]; }
  constexpr double d2() const requires(N >= 2) { return 2.0 * t_[2]; }
  constexpr double d3() const requires(N >= 3) { return 6.0 * t_[3]; }

  constexpr const Coefficients& coefficients() const { return t_; }

  constexpr bool finite() const {
    for (double c : t_)
      if (!std::isfinite(c)) return false;
    return true;
  }

  constexpr Jet operator-() const {
    Jet r;
    for (int k = 0; k <= N; ++k) r.t_[k] = -t_[k];
    return r;
  }

  constexpr Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= N; ++k) t_[k] += o.t_[k];
    return *this;
  }
  constexpr Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= N; ++k) t_[k] -= o.t_[k];
    return *this;
  }
  constexpr Jet& operator*=(const Jet& o) { return *this = *this * o; }
  constexpr Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }

  friend constexpr Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k <= N; ++k) {
      double s = 0.0;
      for (int i = 0; i <= k; ++i) s += a.t_[i] * b.t_[k - i];
      r.t_[k] = s;
    }
    return r;
  }

  friend constexpr Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  /// Applies f to g given the Taylor coefficients c_k = f^(k)(g0)/k! of f at
  /// g0 = g.value(): f(g) = sum_k c_k (g - g0)^k, truncated at order N.
  friend constexpr Jet compose(const Jet& g, const Coefficients& c) {
    Jet delta = g;
    delta.t_[0] = 0.0;
    Jet result(c[0]);
    Jet power(1.0);
    for (int k = 1; k <= N; ++k) {
      power = power * delta;
      for (int i = 0; i <= N; ++i) result.t_[i] += c[k] * power.t_[i];
    }
    return result;
  }

  friend constexpr Jet reciprocal(const Jet& g) {
    const double v = g.value();
    Coefficients c{};
    double p = 1.0 / v;
    for (int k = 0; k <= N; ++k) {
      c[k] = (k % 2 == 0 ? p : -p);
      p /= v;
    }
    return compose(g, c);
  }

 private:
  Coefficients t_{};
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;
using Jet3 = Jet<3>;

template <int N>
constexpr Jet<N> sin(const Jet<N>& g) {
  const double s = std::sin(g.value());
  const double c = std::cos(g.value());
  typename Jet<N>::Coefficients k{};
  double fact = 1.0;
  for (int i = 0; i <= N; ++i) {
    if (i > 0) fact *= i;
    const double d = (i % 4 == 0) ? s : (i % 4 == 1) ? c : (i % 4 == 2) ? -s : -c;
    k[i] = d / fact;
  }
  return compose(g, k);
}

template <int N>
constexpr Jet<N> cos(const Jet<N>& g) {
  const double s = std::sin(g.value());
  const double c = std::cos(g.value());
  typename Jet<N>::Coefficients k{};
  double fact = 1.0;
  for (int i = 0; i <= N; ++i) {
    if (i > 0) fact *= i;
    const double d = (i % 4 == 0) ? c : (i % 4 == 1) ? -s : (i % 4 == 2) ? -c : s;
    k[i] = d / fact;
  }
  return compose(g, k);
}

template <int N>
constexpr Jet<N> tan(const Jet<N>& g) {
  return sin(g) / cos(g);
}

template <int N>
constexpr Jet<N> exp(const Jet<N>& g) {
  const double e = std::exp(g.value());
  typename Jet<N>::Coefficients k{};
  double fact = 1.0;
  for (int i = 0; i <= N; ++i) {
    if (i > 0) fact *= i;
    k[i] = e / fact;
  }
  return compose(g, k);
}

template <int N>
constexpr Jet<N> log(const Jet<N>& g) {
  const double v = g.value();
  typename Jet<N>::Coefficients k{};
  k[0] = std::log(v);
  double p = 1.0;
  for (int i = 1; i <= N; ++i) {
    p /= v;
    k[i] = ((i % 2 == 1) ? p : -p) / i;
  }
  return compose(g, k);
}

/// g^p for a real constant exponent; requires g.value() > 0 unless p is a
/// non-negative integer (use the integer overload then).
template <int N>
constexpr Jet<N> pow(const Jet<N>& g, double p) {
  const double v = g.value();
  typename Jet<N>::Coefficients k{};
  double binom = 1.0;  // p choose i
  for (int i = 0; i <= N; ++i) {
    if (i > 0) binom *= (p - (i - 1)) / i;
    k[i] = binom * std::pow(v, p - i);
  }
  return compose(g, k);
}

template <int N>
constexpr Jet<N> pow(const Jet<N>& g, int n) {
  if (n < 0) return reciprocal(pow(g, -n));
  Jet<N> result(1.0);
  Jet<N> base = g;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

template <int N>
constexpr Jet<N> sqrt(const Jet<N>& g) {
  return pow(g, 0.5);
}

/// d/dy of a jet, losing one order.
template <int N>
constexpr Jet<N - 1> derivative(const Jet<N>& g) requires(N >= 1) {
  typename Jet<N - 1>::Coefficients t{};
  for (int k = 0; k < N; ++k) t[k] = (k + 1) * g.taylor(k + 1);
  return Jet<N - 1>::from_taylor(t);
}

template <int M, int N>
constexpr Jet<M> truncate(const Jet<N>& g) requires(M <= N) {
  typename Jet<M>::Coefficients t{};
  for (int k = 0; k <= M; ++k) t[k] = g.taylor(k);
  return Jet<M>::from_taylor(t);
}

}  // namespace lagstab
