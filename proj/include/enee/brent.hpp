#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>

namespace enee {

/// Brent's method: bracketing scalar root finder combining bisection,
/// secant and inverse quadratic interpolation.
///
/// Requires f(a) and f(b) of opposite sign (either may be zero). Iterates
/// until |f| < f_tol or the bracket collapses to floating-point resolution,
/// and returns the best abscissa; returns nullopt only if the input bracket
/// is invalid.
inline std::optional<double> brent_root(const std::function<double(double)>& f,
                                        double a, double b, double fa,
                                        double fb, double f_tol,
                                        int max_iterations = 200) {
  if (std::isnan(fa) || std::isnan(fb)) return std::nullopt;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) return std::nullopt;

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < max_iterations; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::abs(b) + 1e-15;
    const double xm = 0.5 * (c - b);
    if (std::abs(fb) < f_tol || std::abs(xm) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Attempt inverse quadratic / secant interpolation
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if (std::isnan(fb)) return std::nullopt;
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  return b;
}

}  // namespace enee
