#pragma once

// Test-only oracles, independent of the library code paths they check.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

// Adaptive Simpson quadrature.
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("adaptive Simpson: depth exhausted");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int depth = 60) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Complete elliptic integral of the first kind, modulus convention:
// K(x) = int_0^{pi/2} dtheta / sqrt(1 - x^2 sin^2 theta).
inline double elliptic_k(double x) {
  return integrate(
      [x](double th) {
        const double s = std::sin(th);
        return 1.0 / std::sqrt(1.0 - x * x * s * s);
      },
      0.0, 1.5707963267948966, 1e-10);
}

// p-th moment of the arcsine measure on [0,1]: binom(2p, p) / 4^p.
inline double arcsine_moment(int p) {
  double v = 1.0;
  for (int i = 1; i <= p; ++i) v *= (2.0 * i - 1.0) / (2.0 * i);
  return v;
}

}  // namespace oracles
