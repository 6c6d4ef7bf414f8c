#include "lagstab/variational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "hermite.hpp"
#include "lagstab/error.hpp"

namespace lagstab {

Rank1Terms rank1_terms(const SodeCoefficients& c) {
  const double T = c.T.value(), Tp = c.T.d1();
  const double R = c.R.value(), Rp = c.R.d1();
  const double S = c.S.value(), Sp = c.S.d1(), Spp = c.S.d2();
  const double Up = c.U.d1(), Upp = c.U.d2();
  const std::array<double, 12> t = {
      2 * T * Sp * Sp,  S * S * T * Rp, -S * S * R * Tp,  -2 * R * Sp * Up, Up * Spp,         -Sp * Upp,
      S * Sp * Tp,      S * R * R * Up, -S * Rp * Up,     -S * T * Spp,     -S * R * T * Sp, S * R * Upp,
  };
  Rank1Terms r;
  for (double v : t) {
    r.value += v;
    r.scale += std::abs(v);
  }
  return r;
}

double rank1_residual(const RstuSode& sode, double y) { return rank1_terms(sode(y)).value; }

Jet1 nu_jet(const SodeCoefficients& c, double y, double zero_tol) {
  const auto [p1, p2] = jacobi_jets(c);
  if (!(std::abs(p2.value()) > zero_tol)) throw Phi22Vanishes(y);
  return p1 / p2;
}

double nu(const RstuSode& sode, double y, double zero_tol) { return nu_jet(sode(y), y, zero_tol).value(); }

CriteriaResiduals criteria_residuals(const RstuSode& sode, int grid_points, double phi_tol) {
  if (grid_points < 16) throw InvalidParameter("variationality check needs at least 16 grid points");
  const Interval iv = sode.working_interval();
  double r1 = 0, r1s = 0, r2 = 0, r2s = 0, r3 = 0, r3s = 0;
  CriteriaResiduals out;
  out.min_abs_phi22 = INFINITY;
  for (int i = 0; i < grid_points; ++i) {
    const double y = iv.midpoint(i, grid_points);
    const SodeCoefficients c = sode(y);
    const Rank1Terms rk = rank1_terms(c);
    r1 = std::max(r1, std::abs(rk.value));
    r1s = std::max(r1s, rk.scale);

    const auto [p1, p2] = jacobi_jets(c);
    out.min_abs_phi22 = std::min(out.min_abs_phi22, std::abs(p2.value()));
    if (std::abs(p2.value()) <= phi_tol) {
      ++out.skipped;
      continue;
    }
    const Jet1 n = p1 / p2;
    const double nv = n.value(), np = n.d1();
    const double S = c.S.value(), Sp = c.S.d1(), Up = c.U.d1();
    const double T = c.T.value(), R = c.R.value();
    r2 = std::max(r2, std::abs(Up - np * S - nv * Sp));
    r2s = std::max(r2s, std::abs(Up) + std::abs(np * S) + std::abs(nv * Sp));
    r3 = std::max(r3, std::abs(np - T + R * nv));
    r3s = std::max(r3s, (std::abs(p1.d1()) + std::abs(nv * p2.d1())) / std::abs(p2.value()) + std::abs(T) +
                            std::abs(R * nv));
  }
  auto ratio = [](double r, double s) { return s > 0 ? r / s : r; };
  out.rank1 = ratio(r1, r1s);
  out.potential = ratio(r2, r2s);
  out.nu_ode = ratio(r3, r3s);
  return out;
}

VariationalityVerdict variational_check(const RstuSode& sode, int grid_points, double tol) {
  if (!(tol > 0)) throw InvalidParameter("tolerance must be positive");
  if (grid_points < 16) throw InvalidParameter("variationality check needs at least 16 grid points");
  const Interval iv = sode.working_interval();
  double phi22_max = 0;
  for (int i = 0; i < grid_points; ++i)
    phi22_max = std::max(phi22_max, std::abs(jacobi(sode, iv.midpoint(i, grid_points)).second));

  VariationalityVerdict v;
  v.tol = tol;
  v.grid_points = grid_points;
  if (phi22_max < tol) {
    const CriteriaResiduals r = criteria_residuals(sode, grid_points, INFINITY);
    v.branch = VariationalBranch::Phi22Zero;
    v.is_variational = true;
    v.rank1_max_residual = r.rank1;
    v.min_abs_phi22 = r.min_abs_phi22;
    return v;
  }

  const CriteriaResiduals r = criteria_residuals(sode, grid_points, std::max(tol * phi22_max, 1e-12));
  v.branch = VariationalBranch::EquivalentCriteria;
  v.rank1_max_residual = r.rank1;
  v.potential_residual = r.potential;
  v.nu_residual = r.nu_ode;
  v.min_abs_phi22 = r.min_abs_phi22;

  const std::array<double, 3> res = {r.rank1, r.potential, r.nu_ode};
  const auto passing = std::count_if(res.begin(), res.end(), [&](double x) { return x <= tol; });
  if (passing == 3) {
    v.is_variational = true;
  } else if (passing > 0 && std::any_of(res.begin(), res.end(), [&](double x) { return x > 10 * tol; })) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "variationality criteria disagree: rank1=%.3g, (U-nu S)'=%.3g, nu'-(T-R nu)=%.3g (tol %.3g)",
                  r.rank1, r.potential, r.nu_ode, tol);
    throw InconsistentCriteria(buf);
  }
  return v;
}

// ---------------------------------------------------------------------------

struct Multiplier::Impl {
  RstuSode sode;
  double A = 1;
  double rho1 = 1;
  Interval table;
  detail::SplitGrid grid;
  std::vector<std::array<double, 3>> I;  // int_0^y R with its two derivatives
  std::vector<std::array<double, 3>> W;  // int_0^y rho2 S with its two derivatives

  void check(double y) const {
    if (!(y >= table.lo && y <= table.hi)) throw DomainError("outside the multiplier table", y);
  }
  Jet2 integral(const std::vector<std::array<double, 3>>& f, double y) const {
    check(y);
    const int k = grid.cell(y);
    return detail::quintic_hermite<2>(grid.node(k), grid.cell_width(k), y, f[k].data(), f[k + 1].data());
  }
};

Multiplier::Multiplier(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

double Multiplier::A() const { return impl_->A; }
double Multiplier::rho1() const { return impl_->rho1; }
const Interval& Multiplier::interval() const { return impl_->table; }
const RstuSode& Multiplier::sode() const { return impl_->sode; }

Jet1 Multiplier::nu(double y) const {
  impl_->check(y);
  return nu_jet(impl_->sode(y), y);
}

Jet2 Multiplier::rho2(double y) const { return impl_->A * exp(-2.0 * impl_->integral(impl_->I, y)); }

Jet2 Multiplier::potential(double y) const { return -impl_->integral(impl_->W, y); }

double Multiplier::g12(double y) const { return -rho1() * nu(y).value(); }

double Multiplier::g22(double y) const {
  const double n = nu(y).value();
  return rho1() * n * n + rho2(y).value();
}

double Multiplier::energy(double y, double xdot, double ydot) const {
  const double n = nu(y).value();
  const double r1 = rho1();
  const double g12 = -r1 * n;
  const double g22 = r1 * n * n + rho2(y).value();
  return 0.5 * (r1 * xdot * xdot + 2 * g12 * xdot * ydot + g22 * ydot * ydot) + potential(y).value();
}

Multiplier build_multiplier(const RstuSode& sode, const MultiplierOptions& opts) {
  if (opts.A == 0.0 || !std::isfinite(opts.A)) throw InvalidParameter("multiplier constant A must be non-zero");
  if (!std::isfinite(opts.rho1)) throw InvalidParameter("rho1 must be finite");
  if (opts.cells < 8) throw InvalidParameter("multiplier table needs at least 8 cells");
  const Interval iv = sode.working_interval();
  if (!(iv.lo < 0 && 0 < iv.hi)) throw InvalidParameter("the working interval must contain the equilibrium y = 0");

  auto impl = std::make_shared<Multiplier::Impl>(Multiplier::Impl{sode, opts.A, 0, {}, {}, {}, {}});
  impl->rho1 = opts.rho1 != 0.0 ? opts.rho1 : (opts.A > 0 ? 1.0 : -1.0);
  const double margin = 1e-6 * iv.width();
  impl->table = {iv.lo + margin, iv.hi - margin};
  impl->grid = detail::SplitGrid(impl->table.lo, impl->table.hi, opts.cells);
  const detail::SplitGrid& grid = impl->grid;
  const int n = static_cast<int>(grid.size());
  const int z = grid.zero_index();

  // Phi^2_2 must keep one strict sign: nu is undefined across its zeros.
  std::vector<SodeCoefficients> coef(static_cast<std::size_t>(n));
  double phi_max = 0;
  std::vector<double> phi22(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    coef[k] = sode(grid.node(k));
    phi22[k] = jacobi_jets(coef[k]).second.value();
    phi_max = std::max(phi_max, std::abs(phi22[k]));
  }
  const double phi_tol = std::max(1e-12 * phi_max, 1e-300);
  for (int k = 0; k < n; ++k)
    if (std::abs(phi22[k]) <= phi_tol || (phi22[k] > 0) != (phi22[z] > 0)) throw Phi22Vanishes(grid.node(k));

  const double width = impl->table.width();
  // For W the tolerance is taken relative to |A|, the scale of rho2.
  auto integrate_outward = [&](std::vector<std::array<double, 3>>& F, const std::function<double(double)>& f,
                               double scale) {
    auto tol = [&](int k) {
      QuadratureOptions q;
      q.tol = opts.quad_tol * scale * grid.cell_width(k) / width;
      return q;
    };
    for (int k = z + 1; k < n; ++k)
      F[k][0] = F[k - 1][0] + adaptive_simpson(f, grid.node(k - 1), grid.node(k), tol(k - 1));
    for (int k = z - 1; k >= 0; --k)
      F[k][0] = F[k + 1][0] - adaptive_simpson(f, grid.node(k), grid.node(k + 1), tol(k));
  };

  impl->I.assign(static_cast<std::size_t>(n), {0, 0, 0});
  for (int k = 0; k < n; ++k) impl->I[k] = {0, coef[k].R.value(), coef[k].R.d1()};
  integrate_outward(impl->I, [&](double y) { return sode(y).R.value(); }, 1.0);

  impl->W.assign(static_cast<std::size_t>(n), {0, 0, 0});
  for (int k = 0; k < n; ++k) {
    const double rho = opts.A * std::exp(-2.0 * impl->I[k][0]);
    const SodeCoefficients& c = coef[k];
    impl->W[k] = {0, rho * c.S.value(), rho * (c.S.d1() - 2 * c.R.value() * c.S.value())};
  }
  const Multiplier::Impl& partial = *impl;
  integrate_outward(impl->W, [&](double y) {
    const double I = partial.integral(partial.I, y).value();
    return opts.A * std::exp(-2.0 * I) * sode(y).S.value();
  }, std::abs(opts.A));

  return Multiplier(std::move(impl));
}

PotentialChecks potential_checks(const Multiplier& mult, const RstuSode& sode, double tol) {
  const SodeCoefficients c0 = sode(0.0);
  const double S0 = c0.S.value(), U0 = c0.U.value();
  if (std::abs(S0) > tol * (1 + std::abs(c0.S.d1())) || std::abs(U0) > tol * (1 + std::abs(c0.U.d1())))
    throw EquilibriumMissing(S0, U0);

  auto V = [&](double y) { return mult.potential(y).value(); };
  auto d1 = [&](double h) { return (V(h) - V(-h)) / (2 * h); };
  auto d2 = [&](double h) { return (V(h) - 2 * V(0.0) + V(-h)) / (h * h); };
  constexpr double h = 1e-3;
  PotentialChecks pc;
  pc.v_prime_0 = (4 * d1(h / 2) - d1(h)) / 3;
  pc.v_second_0 = (4 * d2(h / 2) - d2(h)) / 3;
  pc.s_prime_0 = c0.S.d1();
  pc.expected_second = -mult.rho2(0.0).value() * pc.s_prime_0;
  return pc;
}

double HelmholtzResidual::max() const { return std::max({nabla_g, phi_symmetry, dv_symmetry}); }

HelmholtzResidual helmholtz_residual(const RstuSode& sode, const Multiplier& mult, double y, double ydot) {
  const SodeCoefficients c = sode(y);
  const Jet1 n = nu_jet(c, y);
  const double nv = n.value(), np = n.d1();
  const double T = c.T.value(), R = c.R.value();
  const double r1 = mult.rho1();

  const Jet2 rho = mult.rho2(y);
  const double rho2 = rho.value(), rho2p = rho.d1();

  const double n12 = r1 * ydot * (T - R * nv - np);
  const double n22 = ydot * (2 * r1 * nv * (np - T + R * nv) + rho2p + 2 * R * rho2);
  const auto [p1, p2] = jacobi_jets(c);

  HelmholtzResidual hr;
  hr.nabla_g = std::max(std::abs(n12), std::abs(n22));
  hr.phi_symmetry = std::abs(r1 * (p1.value() - nv * p2.value()));
  hr.dv_symmetry = 0.0;  // g depends on y only
  return hr;
}

}  // namespace lagstab
