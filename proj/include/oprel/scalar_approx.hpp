#pragma once

#include <functional>

#include "oprel/quadrature.hpp"

namespace oprel {

// Building block f_t(x) = (x-1) / (t(x-1) + 1) for t in [0,1], x > 0.
double f_t(double t, double x);

// f_t^+(x) = ((1-t) x^{-1} + t)^{-1} = x f_t(x)/(x-1), with the continuity
// value 1 at x = 1.
double f_t_plus(double t, double x);

enum class Variant { centered, positive };

// Quadrature-based rational approximant of an operator monotone function.
//   centered: r_m(x)  = g1 + g1prime * sum_j w_j f_{t_j}(x)
//   positive: r_m+(x) = g0 + (g1 - g0) * sum_j w_j f^+_{t_j}(x)
// scaling_k > 0 composes with 2^k-th roots: r_{m,k}(x) = 2^k r_m(x^{1/2^k})
// (log anchors only).
struct RationalApproximant {
  Variant variant = Variant::centered;
  QuadratureRule rule;
  int scaling_k = 0;
  double g1 = 0.0;       // g(1), both variants
  double g1prime = 1.0;  // g'(1), centered variant
  double g0 = 0.0;       // g(0), positive variant
};

// The log instance: Gauss-Legendre rule, anchors g(1)=0, g'(1)=1.
RationalApproximant log_approximant(int m, int k = 0);

// The sqrt instance: arcsine rule, anchors g(0)=0, g(1)=1.
RationalApproximant sqrt_approximant(int m);

// Quadrature sum with k = 0 (the base rational function).
double eval_rm(const RationalApproximant& a, double x);

// 2^k r_m(x^{1/2^k}); requires the centered variant with log anchors. The
// root is taken by k successive square roots.
double eval_rmk(const RationalApproximant& a, double x);

// 2^k |sqrt(kappa) - sqrt(1/kappa)|^2 ((sqrt(kappa)-1)/(sqrt(kappa)+1))^{2m-1}
// with kappa = x^{1/2^k}; an upper bound for |r_{m,k}(x) - log x|.
double error_bound_log(double x, int m, int k);

// Bounds for general operator monotone instances: the symmetric flag selects
// the sharper bound available when the measure is invariant under t -> 1-t.
double error_bound_monotone(double x, int m, bool symmetric, double g1prime);

// Bound for the positive variant: 4 (g1-g0) sqrt(x) rho^{2m} / (1-rho).
double error_bound_positive(double x, int m, double g0, double g1);

struct LogParams {
  int m = 1;
  int k = 0;
};

// Parameters guaranteeing sup_{x in [1/a,a]} |r_{m,k}(x) - log x| <= eps:
// k = k1 + k2 with k1 = ceil(log2 ln a) + 1, k2 the smallest even integer
// above sqrt(log2(32 ln a / eps)), and m = k2 / 2.
LogParams choose_params_log(double a, double eps);

// Number of leading Taylor coefficients of r_m at x = 1 that match the
// reference series (coefficient p of (x-1)^p), within 1e-10. Requires k = 0.
// The Lebesgue/Gauss-Legendre instance is evaluated in exact rational
// arithmetic; other measures use the rule's double-precision moments.
int taylor_match_order(const RationalApproximant& a, const std::function<double(int)>& series);

// Chebyshev coefficient a_j(x) of t -> f~_t(x) = f_{(1-t)/2}(x) on [-1,1]:
// (sqrt(x) - 1/sqrt(x)) for j = 0 and twice that times rho^j for j >= 1,
// where rho = (sqrt(x)-1)/(sqrt(x)+1).
double cheb_coeff_ft(double x, int j);

// Partial Chebyshev sum sum_{j<terms} a_j(x) T_j(t); converges to f~_t(x).
double cheb_partial_sum_ft(double x, double t, int terms);

double f_tilde(double t, double x);  // f_{(1-t)/2}(x)

}  // namespace oprel
