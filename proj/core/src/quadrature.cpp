#include "lagstab/quadrature.hpp"

#include <cmath>

#include "lagstab/error.hpp"

namespace lagstab {
namespace {

struct Simpson {
  const std::function<double(double)>& f;
  double a0;
  double b0;
  long budget;
  mutable long evals = 0;

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    evals += 2;
    if (!std::isfinite(flm) || !std::isfinite(frm)) throw QuadratureFailure(a0, b0);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Below the rounding level of the panel nothing more can be gained.
    const double mass = (b - a) / 12.0 * (std::abs(fa) + 4.0 * std::abs(flm) + 2.0 * std::abs(fm) +
                                          4.0 * std::abs(frm) + std::abs(fb));
    if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= 1e-14 * mass) return left + right + delta / 15.0;
    if (depth <= 0 || evals > budget) throw QuadratureFailure(a0, b0);
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) throw QuadratureFailure(a, b);
  const Simpson s{f, a, b, opts.max_evals};
  // Two forced levels so that integrands vanishing at the three initial nodes
  // are still resolved.
  const double ml = 0.5 * (a + m);
  const double mr = 0.5 * (m + b);
  const double fml = f(ml);
  const double fmr = f(mr);
  if (!std::isfinite(fml) || !std::isfinite(fmr)) throw QuadratureFailure(a, b);
  const double left = (m - a) / 6.0 * (fa + 4.0 * fml + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * fmr + fb);
  return s.recurse(a, m, fa, fml, fm, left, 0.5 * opts.tol, opts.max_depth) +
         s.recurse(m, b, fm, fmr, fb, right, 0.5 * opts.tol, opts.max_depth);
}

}  // namespace lagstab
