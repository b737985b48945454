#include "oprel/scalar_approx.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "oprel/errors.hpp"

namespace oprel {

namespace {

using rational = boost::multiprecision::cpp_rational;

double root_2k(double x, int k) {
  for (int i = 0; i < k; ++i) x = std::sqrt(x);
  return x;
}

// Extended-precision core: the 2^k scaling amplifies rounding in the k
// successive square roots, so the root chain and quadrature sum run in long
// double to keep the evaluated error floor well under the stated bounds.
long double eval_rm_core(const RationalApproximant& a, long double x) {
  if (x == 1.0L) return a.g1;
  long double s = 0.0L;
  if (a.variant == Variant::centered) {
    for (int j = 0; j < a.rule.order; ++j) {
      const long double t = a.rule.nodes[j];
      s += static_cast<long double>(a.rule.weights[j]) * ((x - 1.0L) / (t * (x - 1.0L) + 1.0L));
    }
    return a.g1 + a.g1prime * s;
  }
  for (int j = 0; j < a.rule.order; ++j) {
    const long double t = a.rule.nodes[j];
    s += static_cast<long double>(a.rule.weights[j]) * (x / ((1.0L - t) + t * x));
  }
  return a.g0 + (a.g1 - a.g0) * s;
}

// Discrete moments sum_j w_j t_j^p of the m-point Gauss-Legendre rule on
// [0,1], in exact rational arithmetic. For p <= 2m-1 these equal 1/(p+1);
// beyond that, t^p is reduced modulo the monic shifted-Legendre polynomial
// pi_m (which vanishes at the nodes), leaving a degree < m remainder whose
// discrete integral equals its exact Lebesgue integral.
std::vector<rational> exact_legendre_moments(int m, int pmax) {
  std::vector<std::vector<rational>> pi(m + 1);
  pi[0] = {rational(1)};
  if (m >= 1) pi[1] = {rational(-1, 2), rational(1)};
  for (int k = 1; k < m; ++k) {
    const rational beta = rational(k) * k / (rational(4) * (rational(4) * k * k - 1));
    std::vector<rational> next(k + 2, rational(0));
    for (int i = 0; i <= k; ++i) {
      next[i + 1] += pi[k][i];                  // t * pi_k
      next[i] -= rational(1, 2) * pi[k][i];     // -1/2 * pi_k
    }
    for (int i = 0; i < k; ++i) next[i] -= beta * pi[k - 1][i];
    pi[k + 1] = std::move(next);
  }
  const std::vector<rational>& pm = pi[m];

  // remainder of t^p mod pi_m, maintained incrementally: rem_{p+1} = t*rem_p mod pi_m
  std::vector<rational> rem(m, rational(0));
  if (m > 0) rem[0] = 1;  // t^0
  std::vector<rational> out;
  out.reserve(pmax + 1);
  for (int p = 0; p <= pmax; ++p) {
    rational mom = 0;
    for (int i = 0; i < m; ++i) mom += rem[i] / (i + 1);
    out.push_back(mom);
    // multiply remainder by t, reduce the degree-m overflow coefficient
    rational top = m > 0 ? rem[m - 1] : rational(0);
    for (int i = m - 1; i > 0; --i) rem[i] = rem[i - 1];
    if (m > 0) rem[0] = 0;
    for (int i = 0; i < m; ++i) rem[i] -= top * pm[i];
  }
  return out;
}

}  // namespace

double f_t(double t, double x) { return (x - 1.0) / (t * (x - 1.0) + 1.0); }

double f_t_plus(double t, double x) {
  if (x == 1.0) return 1.0;
  return x / ((1.0 - t) + t * x);
}

RationalApproximant log_approximant(int m, int k) {
  RationalApproximant a;
  a.variant = Variant::centered;
  a.rule = gauss_legendre(m);
  a.scaling_k = k;
  a.g1 = 0.0;
  a.g1prime = 1.0;
  return a;
}

RationalApproximant sqrt_approximant(int m) {
  RationalApproximant a;
  a.variant = Variant::positive;
  a.rule = gauss_arcsine(m);
  a.scaling_k = 0;
  a.g0 = 0.0;
  a.g1 = 1.0;
  return a;
}

double eval_rm(const RationalApproximant& a, double x) {
  if (!(x > 0.0)) throw DomainError("eval_rm: argument must be positive");
  return static_cast<double>(eval_rm_core(a, x));
}

double eval_rmk(const RationalApproximant& a, double x) {
  if (a.variant != Variant::centered)
    throw DomainError("eval_rmk: requires the centered variant with log anchors");
  if (!(x > 0.0)) throw DomainError("eval_rmk: argument must be positive");
  long double y = x;
  for (int i = 0; i < a.scaling_k; ++i) y = sqrtl(y);
  return static_cast<double>(ldexpl(eval_rm_core(a, y), a.scaling_k));
}

double error_bound_log(double x, int m, int k) {
  if (!(x > 0.0)) throw DomainError("error_bound_log: argument must be positive");
  const double kappa = root_2k(x, k);
  const double s = std::sqrt(kappa);
  const double diff = s - 1.0 / s;
  const double rho = std::abs(s - 1.0) / (s + 1.0);
  return std::ldexp(diff * diff * std::pow(rho, 2 * m - 1), k);
}

double error_bound_monotone(double x, int m, bool symmetric, double g1prime) {
  if (!(x > 0.0)) throw DomainError("error_bound_monotone: argument must be positive");
  const double s = std::sqrt(x);
  const double diff = std::abs(s - 1.0 / s);
  const double rho = std::abs(s - 1.0) / (s + 1.0);
  if (symmetric) return g1prime * diff * diff * std::pow(rho, 2 * m - 1);
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return 4.0 * g1prime * diff * std::pow(rho, 2 * m) / (1.0 - rho);
}

double error_bound_positive(double x, int m, double g0, double g1) {
  if (!(x > 0.0)) throw DomainError("error_bound_positive: argument must be positive");
  const double s = std::sqrt(x);
  const double rho = std::abs(s - 1.0) / (s + 1.0);
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return 4.0 * (g1 - g0) * s * std::pow(rho, 2 * m) / (1.0 - rho);
}

LogParams choose_params_log(double a, double eps) {
  if (!(a > 1.0)) throw DomainError("choose_params_log: a must exceed 1");
  if (!(eps > 0.0)) throw DomainError("choose_params_log: eps must be positive");
  const double lna = std::log(a);
  int k1 = static_cast<int>(std::ceil(std::log2(lna))) + 1;
  k1 = std::max(k1, 0);

  const double arg = 32.0 * lna / eps;
  double target = arg > 1.0 ? std::sqrt(std::log2(arg)) : 0.0;
  int k2 = 2;
  while (static_cast<double>(k2) <= target) k2 += 2;

  LogParams p;
  p.m = k2 / 2;
  p.k = k1 + k2;
  return p;
}

int taylor_match_order(const RationalApproximant& a, const std::function<double(int)>& series) {
  if (a.scaling_k != 0) throw DomainError("taylor_match_order: requires k = 0");
  if (a.variant != Variant::centered)
    throw DomainError("taylor_match_order: requires the centered variant");
  const int m = a.rule.order;
  const int pmax = 4 * m + 4;
  const double tol = 1e-10;

  // Coefficient of (x-1)^p in r_m: the constant is g(1); for p >= 1 the
  // geometric expansion of f_t gives (+-) the (p-1)-th discrete moment.
  std::vector<double> coeff(pmax + 1);
  if (a.variant == Variant::centered && a.rule.measure_tag == "legendre01") {
    std::vector<rational> mom = exact_legendre_moments(m, pmax);
    coeff[0] = a.g1;
    for (int p = 1; p <= pmax; ++p) {
      double mp = static_cast<double>(mom[p - 1]);
      coeff[p] = a.g1prime * ((p % 2 == 1) ? mp : -mp);
    }
  } else {
    coeff[0] = a.g1;
    for (int p = 1; p <= pmax; ++p) {
      const double sign = (p % 2 == 1) ? 1.0 : -1.0;
      coeff[p] = a.g1prime * sign * a.rule.discrete_moment(p - 1);
    }
  }

  int count = 0;
  for (int p = 0; p <= pmax; ++p) {
    if (std::abs(coeff[p] - series(p)) > tol) break;
    ++count;
  }
  return count;
}

double cheb_coeff_ft(double x, int j) {
  if (!(x > 0.0)) throw DomainError("cheb_coeff_ft: argument must be positive");
  const double s = std::sqrt(x);
  const double base = s - 1.0 / s;
  if (j == 0) return base;
  const double rho = (s - 1.0) / (s + 1.0);
  return 2.0 * base * std::pow(rho, j);
}

double f_tilde(double t, double x) { return f_t(0.5 * (1.0 - t), x); }

double cheb_partial_sum_ft(double x, double t, int terms) {
  double sum = 0.0;
  double tk_prev = 1.0, tk = t;  // T_0, T_1
  for (int j = 0; j < terms; ++j) {
    double chev;
    if (j == 0) {
      chev = 1.0;
    } else if (j == 1) {
      chev = t;
    } else {
      chev = 2.0 * t * tk - tk_prev;
      tk_prev = tk;
      tk = chev;
    }
    sum += cheb_coeff_ft(x, j) * chev;
  }
  return sum;
}

}  // namespace oprel
