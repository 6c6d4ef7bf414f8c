#include "lagstab/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <tuple>

#include "hermite.hpp"
#include "lagstab/error.hpp"
#include "lagstab/geometry.hpp"

namespace lagstab {

namespace {

// rank1 as a function of (M, M') at a fixed y. T and R are affine in M, so the
// M-free normal form and the inverse metric are computed once per y.
class Rank1AtY {
 public:
  Rank1AtY(const MechanicalSystem& sys, const Profile& N, double y)
      : y_(y), base_(normal_form_at(sys, y, Jet2(0.0), truncate<2>(N(y)))), inv_(inverse_metric(sys, y)) {}

  Rank1Terms operator()(double M, double Mp) const {
    const Jet2 Mj = Jet2::from_taylor({M, Mp, 0.0});
    SodeCoefficients c = base_;
    c.T += inv_.i11 * Mj;
    c.R += inv_.i12 * Mj;
    return rank1_terms(c);
  }

  double y() const { return y_; }

 private:
  double y_;
  SodeCoefficients base_;
  InverseMetric inv_;
};

// Root of f(p).value near `seed`: geometric bracket expansion around the seed,
// then Illinois with bisection fallback.
template <class F>
double solve_root(F&& f, double seed, double y) {
  const Rank1Terms fs = f(seed);
  if (!std::isfinite(fs.value)) throw RootFindFailure(y);
  if (std::abs(fs.value) <= 1e-14 * fs.scale) return seed;

  double a = seed, fa = fs.value, b = seed, fb = fa;
  bool bracketed = false;
  double s = 1e-3 * (1.0 + std::abs(seed));
  for (int i = 0; i < 64 && !bracketed; ++i, s *= 2) {
    for (double dir : {1.0, -1.0}) {
      const double c = seed + dir * s;
      const double fc = f(c).value;
      if (!std::isfinite(fc)) continue;
      if ((fc > 0) != (fa > 0) || fc == 0) {
        b = c;
        fb = fc;
        bracketed = true;
        break;
      }
    }
  }
  if (!bracketed) throw RootFindFailure(y);
  if (fb == 0) return b;

  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double c = (a * fb - b * fa) / (fb - fa);
    if (!(c > std::min(a, b) && c < std::max(a, b))) c = 0.5 * (a + b);
    const Rank1Terms fc = f(c);
    if (std::abs(fc.value) <= 1e-14 * fc.scale || std::abs(b - a) <= 4e-16 * (1 + std::abs(c))) return c;
    if ((fc.value > 0) == (fb > 0)) {
      b = c;
      fb = fc.value;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc.value;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

// Solve rank1(M, p) = 0 for p near `seed`.
double solve_slope(const Rank1AtY& g, double M, double seed) {
  return solve_root([&](double p) { return g(M, p); }, seed, g.y());
}

struct Branch {
  std::vector<double> M;   // nodes 0, dir h, 2 dir h, ...
  std::vector<double> Mp;
  double h = 0;
};

Branch integrate_branch(const MechanicalSystem& sys, const Profile& N, double M0, double p0, double extent,
                        double step, double dir) {
  Branch br;
  const int n = std::max(1, static_cast<int>(std::ceil(extent / step - 1e-9)));
  br.h = extent / n;
  const double h = br.h;
  br.M.push_back(M0);
  double M = M0, prev = p0;
  for (int k = 0; k < n; ++k) {
    const double y = dir * k * h;
    const double k1 = k == 0 ? p0 : solve_slope(Rank1AtY(sys, N, y), M, prev);
    br.Mp.push_back(k1);
    const Rank1AtY mid(sys, N, y + dir * h / 2);
    const double k2 = solve_slope(mid, M + dir * h / 2 * k1, k1);
    const double k3 = solve_slope(mid, M + dir * h / 2 * k2, k2);
    const double k4 = solve_slope(Rank1AtY(sys, N, y + dir * h), M + dir * h * k3, k3);
    M += dir * h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    br.M.push_back(M);
    prev = k4;
  }
  double last = prev;
  try {
    last = solve_slope(Rank1AtY(sys, N, dir * extent), M, prev);
  } catch (const DomainError&) {
  }
  br.Mp.push_back(last);
  return br;
}

// One-sided limit of M' at 0. Near 0 the M' coefficient and the M terms are of
// the same order, so the solve at y = d uses the consistent M = M0 + p d.
std::optional<double> slope_limit(const MechanicalSystem& sys, const Profile& N, double M0, double d) {
  auto secant_slope = [&](double y, double seed) {
    const Rank1AtY g(sys, N, y);
    return solve_root([&](double p) { return g(M0 + p * y, p); }, seed, y);
  };
  try {
    const double p1 = secant_slope(d, 0.0);
    const double p2 = secant_slope(2 * d, p1);
    return 2 * p1 - p2;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

SolvedControl solve_M(const MechanicalSystem& sys, const Profile& N, double M0, double step,
                      std::optional<Interval> working) {
  if (!(step > 0)) throw InvalidParameter("solve_M step must be positive");
  if (!std::isfinite(M0)) throw InvalidParameter("M0 must be finite");
  const Interval iv = working.value_or(sys.working);
  if (!(iv.lo < 0 && 0 < iv.hi)) throw InvalidParameter("the working interval must contain y = 0");
  // Stay off the ends of the open interval, as the multiplier table does.
  const double margin = 1e-6 * iv.width();
  const Interval span{iv.lo + margin, iv.hi - margin};

  const double d = 1e-2 * std::min(step, std::min(-iv.lo, iv.hi) / 4);
  const auto right0 = slope_limit(sys, N, M0, d);
  const auto left0 = slope_limit(sys, N, M0, -d);
  if (!right0 && !left0) throw SingularAtEquilibrium();
  const double pr = right0.value_or(*left0);
  const double pl = left0.value_or(*right0);

  const Branch right = integrate_branch(sys, N, M0, pr, span.hi, step, +1.0);
  const Branch left = integrate_branch(sys, N, M0, pl, -span.lo, step, -1.0);

  SolvedControl out;
  out.interval = span;
  const int nl = static_cast<int>(left.M.size()) - 1;
  const int nr = static_cast<int>(right.M.size()) - 1;
  for (int k = nl; k >= 1; --k) {
    out.y.push_back(-k * left.h);
    out.M.push_back(left.M[k]);
    out.Mp.push_back(left.Mp[k]);
  }
  out.y.push_back(0.0);
  out.M.push_back(M0);
  out.Mp.push_back(0.5 * (pl + pr));
  for (int k = 1; k <= nr; ++k) {
    out.y.push_back(k * right.h);
    out.M.push_back(right.M[k]);
    out.Mp.push_back(right.Mp[k]);
  }
  out.y.front() = span.lo;
  out.y.back() = span.hi;

  detail::SplitGrid grid;
  grid.lo = span.lo;
  grid.hi = span.hi;
  grid.n_left = nl;
  grid.n_right = nr;
  grid.h_left = left.h;
  grid.h_right = right.h;

  auto table = std::make_shared<const SolvedControl>(out);
  Profile M(
      [table, grid](double y) {
        if (!(y >= grid.lo && y <= grid.hi)) throw DomainError("outside the tabulated M", y);
        const int k = grid.cell(y);
        return detail::cubic_hermite<3>(grid.node(k), grid.cell_width(k), y, table->M[k], table->Mp[k],
                                        table->M[k + 1], table->Mp[k + 1]);
      },
      "tabulated M (" + std::to_string(out.y.size()) + " nodes)");
  out.control = QuadraticControl{M, N};

  constexpr int kVerify = 512;
  double worst = 0, scale = 0;
  for (int i = 0; i < kVerify; ++i) {
    const double y = iv.midpoint(i, kVerify);
    const Rank1Terms r =
        rank1_terms(normal_form_at(sys, y, truncate<2>(out.control.M(y)), truncate<2>(out.control.N(y))));
    worst = std::max(worst, std::abs(r.value));
    scale = std::max(scale, r.scale);
  }
  out.verification = worst / (1.0 + scale);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct BlmJets {
  Jet3 M, N;
};

BlmJets blm_at(const MechanicalSystem& sys, double inv_sigma, double y) {
  const Jet<4> a12 = eval_jet<4>(sys.a12, y);
  const Jet<4> a22 = eval_jet<4>(sys.a22, y);
  const Jet<4> V = eval_jet<4>(sys.V, y);
  const Jet3 a12v = truncate<3>(a12), a22v = truncate<3>(a22);
  const Jet3 a12p = derivative(a12), a22p = derivative(a22), Vp = derivative(V);
  const double k = 1.0 - inv_sigma;
  const Jet3 A22 = a22v - (a12v * a12v / sys.a11) * k;
  if (A22.value() == 0.0) throw DenominatorVanishes(y);
  const Jet3 q = a12v / A22;
  return {inv_sigma * (a12p - q * (0.5 * a22p - k * (a12v / sys.a11) * a12p)), -inv_sigma * q * Vp};
}

}  // namespace

QuadraticControl blm_control_sigma(const MechanicalSystem& sys, double sigma) {
  if (sigma == 0.0 || !std::isfinite(sigma)) throw InvalidParameter("sigma must be finite and non-zero");
  if (sys.a11 == 0.0) throw InvalidParameter("a11 must be a non-zero constant");
  const double is = 1.0 / sigma;
  const double k = 1.0 - is;
  auto A22 = [&](double y) {
    const double a12 = eval(sys.a12, y);
    return eval(sys.a22, y) - a12 * a12 / sys.a11 * k;
  };
  constexpr int kProbe = 257;
  const double y_ref = sys.working.midpoint(kProbe / 2, kProbe);
  const double ref = A22(y_ref);
  if (ref == 0.0) throw DenominatorVanishes(y_ref);
  for (int i = 0; i < kProbe; ++i) {
    const double y = sys.working.midpoint(i, kProbe);
    const double v = A22(y);
    if (v == 0.0 || (v > 0) != (ref > 0)) throw DenominatorVanishes(y);
  }

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", sigma);
  const std::string tag = std::string("matching control, sigma=") + buf;
  auto shared = std::make_shared<const MechanicalSystem>(sys);
  QuadraticControl u;
  u.M = Profile([shared, is](double y) { return blm_at(*shared, is, y).M; }, tag + " (M)");
  u.N = Profile([shared, is](double y) { return blm_at(*shared, is, y).N; }, tag + " (N)");
  return u;
}

QuadraticControl blm_control(const MechanicalSystem& sys, double kappa) {
  if (kappa == 0.0 || !std::isfinite(kappa)) throw InvalidParameter("kappa must be finite and non-zero");
  return blm_control_sigma(sys, -1.0 / kappa);
}

// ---------------------------------------------------------------------------

StabilityReport stability_report(const RstuSode& sode, const VariationalityVerdict& verdict, double tol) {
  StabilityReport r;
  r.variational = verdict.is_variational;
  if (!r.variational) r.notes.emplace_back("the controlled system is not variational");
  SodeCoefficients c;
  try {
    c = sode(0.0);
  } catch (const Error& e) {
    r.notes.emplace_back(std::string("cannot evaluate the system at y=0: ") + e.what());
    return r;
  }
  r.s0 = c.S.value();
  r.u0 = c.U.value();
  r.s_prime_0 = c.S.d1();
  r.phi22_0 = -c.S.d1() + c.R.value() * c.S.value();
  r.equilibrium_ok = std::abs(r.s0) <= tol * (1 + std::abs(c.S.d1())) && std::abs(r.u0) <= tol * (1 + std::abs(c.U.d1()));
  if (!r.equilibrium_ok) r.notes.emplace_back("y=0 is not an equilibrium (S(0) or U(0) non-zero)");
  r.phi22_nonzero = std::abs(r.phi22_0) > tol;
  if (!r.phi22_nonzero) r.notes.emplace_back("Phi^2_2(0) vanishes");
  if (!(r.s_prime_0 < 0)) r.notes.emplace_back("S'(0) is not negative");
  r.stable = r.variational && r.equilibrium_ok && r.phi22_nonzero && r.s_prime_0 < 0;
  return r;
}

std::pair<double, double> dissipative_terms(const MechanicalSystem& sys, const Multiplier& mult, double y) {
  const InverseMetric a = inverse_metric(sys, y);
  const double n = mult.nu(y).value();
  const double r1 = mult.rho1();
  const double g11 = r1, g12 = -r1 * n, g22 = r1 * n * n + mult.rho2(y).value();
  const double i11 = a.i11.value(), i12 = a.i12.value();
  return {g11 * i11 + g12 * i12, g12 * i11 + g22 * i12};
}

DissipativeAugmentation::DissipativeAugmentation(MechanicalSystem sys, Multiplier mult, Expr f)
    : sys_(std::move(sys)), mult_(std::move(mult)), f_(std::move(f)) {}

double DissipativeAugmentation::u2(double x, double y, double xdot, double ydot) const {
  const auto [box, dia] = terms(y);
  return f_at(x, y) * (box * xdot + dia * ydot);
}

double DissipativeAugmentation::dissipation(double x, double y, double xdot, double ydot) const {
  const auto [box, dia] = terms(y);
  const double w = box * xdot + dia * ydot;
  return 0.5 * f_at(x, y) * w * w;
}

std::pair<double, double> DissipativeAugmentation::acceleration(double x, double y, double xdot, double ydot) const {
  const InverseMetric a = inverse_metric(sys_, y);
  const double n = mult_.nu(y).value();
  const double r1 = mult_.rho1();
  const double g12 = -r1 * n, g22 = r1 * n * n + mult_.rho2(y).value();
  const double i11 = a.i11.value(), i12 = a.i12.value();
  const double box = r1 * i11 + g12 * i12, dia = g12 * i11 + g22 * i12;
  const double u = f_at(x, y) * (box * xdot + dia * ydot);
  return {i11 * u, i12 * u};
}

DissipativeAugmentation build_dissipative(const MechanicalSystem& sys, const Multiplier& mult, const Expr& f,
                                          int samples) {
  if (samples < 2) throw InvalidParameter("need at least two samples per axis");
  const Interval& iv = mult.interval();
  bool negative = false;
  for (int i = 0; i < samples; ++i) {
    const double x = -10.0 + 20.0 * i / (samples - 1);
    for (int j = 0; j < samples; ++j) {
      const double y = iv.midpoint(j, samples);
      const double v = eval(f, y, x);
      if (v > 0 || !std::isfinite(v)) throw FNotNegative(x, y, v);
      negative = negative || v < 0;
    }
  }
  if (!negative) throw FNotNegative(0.0, 0.0, eval(f, 0.0, 0.0));
  return DissipativeAugmentation(sys, mult, f);
}

// ---------------------------------------------------------------------------

std::string_view to_string(LaSalleVerdict v) {
  return v == LaSalleVerdict::AsymptoticallyStable ? "asymptotically-stable" : "inconclusive";
}

namespace {

double relative_spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double mag = std::max(std::abs(*lo), std::abs(*hi));
  return mag > 0 ? (*hi - *lo) / mag : 0.0;
}

}  // namespace

LaSalleReport lasalle_check(const RstuSode& sode, const Multiplier& mult, const MechanicalSystem& sys,
                            int grid_points) {
  if (grid_points < 16) throw InvalidParameter("lasalle check needs at least 16 grid points");
  LaSalleReport rep;
  const Interval& iv = mult.interval();
  std::tie(rep.box, rep.diamond) = dissipative_terms(sys, mult, 0.0);

  std::vector<double> box(grid_points), dia(grid_points), quad(grid_points), force(grid_points), ys(grid_points);
  double quad_scale = 0, force_max = 0;
  for (int i = 0; i < grid_points; ++i) {
    const double y = ys[i] = iv.midpoint(i, grid_points);
    std::tie(box[i], dia[i]) = dissipative_terms(sys, mult, y);
    const SodeCoefficients c = sode(y);
    quad[i] = box[i] * c.T.value() + dia[i] * c.R.value();
    quad_scale = std::max(quad_scale, std::abs(box[i] * c.T.value()) + std::abs(dia[i] * c.R.value()));
    force[i] = box[i] * c.U.value() + dia[i] * c.S.value();
    if (std::abs(y) > 1e-12 * iv.width()) force_max = std::max(force_max, std::abs(force[i]));
  }
  rep.constant_terms = relative_spread(box) < 1e-10 && relative_spread(dia) < 1e-10;

  if (rep.constant_terms) {
    const double quad_max = std::abs(*std::max_element(quad.begin(), quad.end(),
                                                       [](double a, double b) { return std::abs(a) < std::abs(b); }));
    if (force_max == 0) {
      rep.detail = "box U + diamond S vanishes identically";
      return rep;
    }
    rep.min_force_ratio = INFINITY;
    for (int i = 0; i < grid_points; ++i)
      if (std::abs(ys[i]) > 1e-12 * iv.width())
        rep.min_force_ratio = std::min(rep.min_force_ratio, std::abs(force[i]) / force_max);
    if (quad_max <= 1e-10 * quad_scale && rep.min_force_ratio > 1e-9) {
      rep.verdict = LaSalleVerdict::AsymptoticallyStable;
      rep.detail = "box and diamond are constant and box U + diamond S != 0 for y != 0";
      return rep;
    }
    rep.detail = "box and diamond are constant but the constant-coefficient test is not decisive; ";
  } else {
    rep.detail = "box and diamond vary with y; ";
  }

  // Follow the reduced flow from points of {box v_x + diamond v_y = 0}.
  std::mt19937_64 rng(0x1a5a11e);
  std::uniform_real_distribution<double> uy(0.8 * iv.lo, 0.8 * iv.hi), uv(-1.0, 1.0);
  constexpr int kStarts = 50, kSteps = 250;
  constexpr double h = 2e-3;
  auto rhs = [&](const std::array<double, 3>& s) {
    const SodeCoefficients c = sode(s[0]);
    const double v = s[1];
    return std::array<double, 3>{v, c.R.value() * v * v + c.S.value(), c.T.value() * v * v + c.U.value()};
  };
  for (int n = 0; n < kStarts; ++n) {
    const double y0 = uy(rng), vy0 = uv(rng);
    const auto [b0, d0] = dissipative_terms(sys, mult, y0);
    ++rep.starts;
    if (b0 == 0) continue;
    std::array<double, 3> s = {y0, vy0, -d0 * vy0 / b0};
    const double scale = std::abs(d0 * vy0) + 1e-300;
    bool stayed = true;
    try {
      for (int k = 0; k < kSteps && stayed; ++k) {
        const auto k1 = rhs(s);
        std::array<double, 3> t;
        for (int j = 0; j < 3; ++j) t[j] = s[j] + 0.5 * h * k1[j];
        const auto k2 = rhs(t);
        for (int j = 0; j < 3; ++j) t[j] = s[j] + 0.5 * h * k2[j];
        const auto k3 = rhs(t);
        for (int j = 0; j < 3; ++j) t[j] = s[j] + h * k3[j];
        const auto k4 = rhs(t);
        for (int j = 0; j < 3; ++j) s[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
        if (!iv.contains(s[0])) {
          stayed = false;
          break;
        }
        if ((k + 1) % 10 == 0) {
          const auto [b, d] = dissipative_terms(sys, mult, s[0]);
          stayed = std::abs(b * s[2] + d * s[1]) <= 1e-6 * scale;
        }
      }
    } catch (const DomainError&) {
      stayed = false;
    }
    if (stayed) ++rep.invariant_starts;
  }
  char buf[160];
  if (rep.invariant_starts == 0)
    std::snprintf(buf, sizeof buf, "no invariant set found over %d sampled starts", rep.starts);
  else
    std::snprintf(buf, sizeof buf, "%d of %d sampled starts stayed on {D = 0}", rep.invariant_starts, rep.starts);
  rep.detail += buf;
  return rep;
}

}  // namespace lagstab
