#pragma once

#include <functional>

namespace lagstab {

struct QuadratureOptions {
  double tol = 1e-10;  ///< absolute error target over the whole interval
  int max_depth = 40;
  long max_evals = 2'000'000;
};

/// Adaptive Simpson rule with Richardson correction. Integrates over [a, b]
/// (b < a gives the negated integral). Throws QuadratureFailure when the
/// recursion depth or evaluation budget is exhausted or the integrand turns non-finite.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts = {});

}  // namespace lagstab
