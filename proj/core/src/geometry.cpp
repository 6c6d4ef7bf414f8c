#include "lagstab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "lagstab/error.hpp"

namespace lagstab {

std::pair<double, double> connection(const RstuSode& sode, double y, double ydot) {
  const SodeCoefficients c = sode(y);
  return {-c.T.value() * ydot, -c.R.value() * ydot};
}

std::pair<Jet1, Jet1> jacobi_jets(const SodeCoefficients& c) {
  const Jet1 T = truncate<1>(c.T), R = truncate<1>(c.R), S = truncate<1>(c.S);
  const Jet1 Up = derivative(c.U), Sp = derivative(c.S);
  return {-Up + S * T, -Sp + R * S};
}

std::pair<double, double> jacobi(const RstuSode& sode, double y) {
  const auto [p1, p2] = jacobi_jets(sode(y));
  return {p1.value(), p2.value()};
}

std::pair<double, double> nabla_phi_coefficients(const SodeCoefficients& c) {
  const double T = c.T.value(), Tp = c.T.d1();
  const double R = c.R.value(), Rp = c.R.d1();
  const double S = c.S.value(), Sp = c.S.d1(), Spp = c.S.d2();
  const double Up = c.U.d1(), Upp = c.U.d2();
  return {2 * Sp * T + S * Tp - Upp - R * Up, S * Rp + R * Sp - Spp};
}

std::pair<double, double> nabla_phi(const RstuSode& sode, double y, double ydot) {
  const auto [k1, k2] = nabla_phi_coefficients(sode(y));
  return {k1 * ydot, k2 * ydot};
}

namespace {

// Phi^i_2 = -df^i/dy - Gamma^i_2 Gamma^2_2 - Gamma(Gamma^i_2) for
// f = (T v^2 + U, R v^2 + S), with v = ydot carried as a dual number.
std::pair<Jet1, Jet1> jacobi_velocity(const SodeCoefficients& c, double ydot) {
  const Jet1 v = Jet1::variable(ydot);
  const double T = c.T.value(), Tp = c.T.d1(), R = c.R.value(), Rp = c.R.d1();
  const double S = c.S.value(), Sp = c.S.d1(), Up = c.U.d1();
  const Jet1 G12 = -T * v, G22 = -R * v;
  const Jet1 f2 = R * v * v + S;
  // Gamma(h(y) v) = v * h' v + h * f^2
  const Jet1 spray_G12 = -(Tp * v * v + T * f2);
  const Jet1 spray_G22 = -(Rp * v * v + R * f2);
  const Jet1 phi12 = -(Tp * v * v + Up) - G12 * G22 - spray_G12;
  const Jet1 phi22 = -(Rp * v * v + Sp) - G22 * G22 - spray_G22;
  return {phi12, phi22};
}

double haantjes_from(const SodeCoefficients& c) {
  const auto [p1, p2] = jacobi_velocity(c, 1.0);
  return p2.value() * (p2.value() * p1.d1() - p1.value() * p2.d1());
}

}  // namespace

double haantjes_component(const RstuSode& sode, double y) { return haantjes_from(sode(y)); }

GeometrySample sample(const RstuSode& sode, double y, double ydot) {
  const SodeCoefficients c = sode(y);
  const auto [p1, p2] = jacobi_jets(c);
  const auto [k1, k2] = nabla_phi_coefficients(c);
  GeometrySample s;
  s.y = y;
  s.ydot = ydot;
  s.Gamma12 = -c.T.value() * ydot;
  s.Gamma22 = -c.R.value() * ydot;
  s.Phi12 = p1.value();
  s.Phi22 = p2.value();
  s.nablaPhi12 = k1 * ydot;
  s.nablaPhi22 = k2 * ydot;
  s.haantjes = haantjes_from(c);
  return s;
}

std::string_view to_string(DouglasCase c) {
  switch (c) {
    case DouglasCase::CaseI: return "CaseI";
    case DouglasCase::CaseIIa1: return "CaseIIa1";
    case DouglasCase::CaseIIa2: return "CaseIIa2";
    case DouglasCase::CaseIIb1prime: return "CaseIIb1prime";
    case DouglasCase::CaseIIIb: return "CaseIIIb";
    case DouglasCase::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

DouglasCase DouglasReport::overall() const {
  if (segments.empty()) return DouglasCase::Indeterminate;
  const DouglasCase first = segments.front().verdict;
  for (const auto& s : segments)
    if (s.verdict != first) return DouglasCase::Indeterminate;
  return first;
}

DouglasReport classify(const RstuSode& sode, int grid_points, double zero_tol) {
  if (grid_points < 16) throw InvalidParameter("classify needs at least 16 grid points");
  if (!(zero_tol > 0)) throw InvalidParameter("zero tolerance must be positive");

  DouglasReport rep;
  rep.interval = sode.working_interval();
  rep.zero_tol = zero_tol;
  rep.samples.reserve(static_cast<std::size_t>(grid_points));

  double phi_max = 0, disc_scale = 0, haan_scale = 0;
  for (int i = 0; i < grid_points; ++i) {
    const GeometrySample s = sample(sode, rep.interval.midpoint(i, grid_points), 1.0);
    phi_max = std::max({phi_max, std::abs(s.Phi12), std::abs(s.Phi22)});
    // Product of magnitudes, not the magnitude of the products: when Phi^2_2 is
    // pure rounding noise the latter would scale the threshold with the noise.
    disc_scale = std::max(disc_scale, (std::abs(s.nablaPhi12) + std::abs(s.nablaPhi22)) *
                                          (std::abs(s.Phi12) + std::abs(s.Phi22)));
    haan_scale = std::max(haan_scale, s.Phi22 * s.Phi22 * (std::abs(s.Phi12) + std::abs(s.Phi22)));
    rep.samples.push_back(s);
  }
  rep.phi_tol = std::max(zero_tol * phi_max, 1e-12);
  rep.disc_tol = std::max(zero_tol * disc_scale, 1e-12);
  const double haan_tol = std::max(zero_tol * haan_scale, 1e-12);

  auto verdict_of = [&](const GeometrySample& s) {
    const bool phi12_zero = std::abs(s.Phi12) <= rep.phi_tol;
    const bool phi22_zero = std::abs(s.Phi22) <= rep.phi_tol;
    if (phi12_zero && phi22_zero) return DouglasCase::CaseI;
    const double disc = std::abs(s.nablaPhi12 * s.Phi22 - s.nablaPhi22 * s.Phi12);
    if (disc > 100 * rep.disc_tol) return DouglasCase::CaseIIIb;
    if (disc > rep.disc_tol) return DouglasCase::Indeterminate;
    if (phi22_zero) return DouglasCase::CaseIIb1prime;
    return std::abs(s.haantjes) <= haan_tol ? DouglasCase::CaseIIa1 : DouglasCase::CaseIIa2;
  };
  auto sign_of = [&](const GeometrySample& s) {
    if (std::abs(s.Phi22) <= rep.phi_tol) return 0;
    return s.Phi22 > 0 ? 1 : -1;
  };

  const double step = rep.interval.width() / grid_points;
  for (int i = 0; i < grid_points; ++i) {
    const DouglasCase v = verdict_of(rep.samples[i]);
    const int sg = sign_of(rep.samples[i]);
    if (!rep.segments.empty()) {
      DouglasSegment& cur = rep.segments.back();
      if (cur.verdict == v && sign_of(rep.samples[cur.last]) == sg) {
        cur.last = i;
        continue;
      }
      cur.hi = rep.interval.lo + i * step;
    }
    rep.segments.push_back({rep.interval.lo + i * step, rep.interval.hi, v, i, i});
  }
  rep.segments.back().hi = rep.interval.hi;
  return rep;
}

}  // namespace lagstab
