#include "oprel/funceq.hpp"

#include <cmath>

#include "oprel/rng.hpp"
#include "oprel/scalar_approx.hpp"

namespace oprel {

namespace {

// truncated power series around u = 0
using Series = std::vector<double>;

Series smul(const Series& a, const Series& b) {
  Series c(a.size(), 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

Series ssqrt(const Series& a) {
  Series r(a.size(), 0.0);
  r[0] = std::sqrt(a[0]);
  for (size_t n = 1; n < a.size(); ++n) {
    double s = a[n];
    for (size_t i = 1; i < n; ++i) s -= r[i] * r[n - i];
    r[n] = s / (2.0 * r[0]);
  }
  return r;
}

double scalar_log_mean_target(double x) {  // g(x) = (x-1)/log x, g(1) = 1
  const double u = x - 1.0;
  if (std::abs(u) < 1e-14) return 1.0 + 0.5 * u;
  return u / std::log1p(u);
}

void validate_functional_equation(const MeanIteration& iter) {
  Rng rng(0xfeedULL + iter.name.size());
  for (int i = 0; i < 100; ++i) {
    const double x = std::exp(rng.uniform(-2.0, 2.0));
    const double y = std::exp(rng.uniform(-2.0, 2.0));
    const double before = iter.target(x, y);
    const double after = iter.target(iter.p_h1(x, y), iter.p_h2(x, y));
    if (std::abs(after - before) > 1e-10 * std::max(1.0, std::abs(before)))
      throw NumericalError("mean iteration '" + iter.name +
                           "' violates its functional equation");
  }
}

// one geometric-mean slack s with [[u, s],[s, v]] >= 0 (s <= sqrt(uv))
AffineSlot emit_sqrt_slack(LinearMatrixSystem& sys, const AffineSlot& u, const AffineSlot& v,
                           const std::string& name) {
  const int s = sys.add_variable(name, 1, false, VarRole::auxiliary);
  LmiBlock& blk = sys.new_block(2, name);
  sys.place(blk, 0, 0, u, 1.0);
  sys.place(blk, 0, 1, sys.slot(s), 1.0);
  sys.place(blk, 1, 0, sys.slot(s), 1.0);
  sys.place(blk, 1, 1, v, 1.0);
  return sys.slot(s);
}

AffineSlot half_sum(const AffineSlot& a, const AffineSlot& b) {
  AffineSlot out;
  out.dim = a.dim;
  out.constant = (a.constant + b.constant) * cplx(0.5, 0.0);
  out.terms = a.terms;
  for (auto& [v, c] : out.terms) c *= 0.5;
  for (const auto& [v, c] : b.terms) out.terms.push_back({v, 0.5 * c});
  return out;
}

}  // namespace

double agm(double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw DomainError("agm: arguments must be positive");
  while (std::abs(x - y) > 1e-15 * (x + y)) {
    const double a = 0.5 * (x + y);
    const double g = std::sqrt(x * y);
    x = a;
    y = g;
  }
  return 0.5 * (x + y);
}

double log_mean(double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw DomainError("log_mean: arguments must be positive");
  if (x == y) return x;
  return (x - y) / (std::log(x) - std::log(y));
}

std::vector<double> agm_mu_moments(int count) {
  // series of AGM(1+u, 1): iterate the mean pair in truncated series
  // arithmetic; coefficients stabilize after ~log2(length) rounds
  const int len = count + 2;
  Series a(len, 0.0), b(len, 0.0);
  a[0] = 1.0;
  a[1] = 1.0;
  b[0] = 1.0;
  for (int round = 0; round < 2 * len + 8; ++round) {
    Series mean(len);
    for (int i = 0; i < len; ++i) mean[i] = 0.5 * (a[i] + b[i]);
    Series geo = ssqrt(smul(a, b));
    a = mean;
    b = geo;
  }
  // mu_p = mu_{p-1} - (-1)^{p-1} c_p / (g1 - g0), with g1 - g0 = 1
  std::vector<double> mu(count);
  mu[0] = 1.0;
  for (int p = 1; p < count; ++p) {
    const double sign = (p % 2 == 1) ? 1.0 : -1.0;
    mu[p] = mu[p - 1] - sign * a[p];
  }
  return mu;
}

MeanIteration log_mean_iteration() {
  MeanIteration it;
  it.name = "log_mean";
  it.h1 = [](double x) { return 0.5 * (x + std::sqrt(x)); };
  it.h2 = [](double x) { return 0.5 * (1.0 + std::sqrt(x)); };
  it.h1_at1 = 1.0;
  it.h2_at1 = 1.0;
  it.dh1_at1 = 0.75;
  it.dh2_at1 = 0.25;
  it.c = 2.0;
  it.c0 = std::nullopt;
  it.g0 = 0.0;
  it.g1 = 1.0;
  it.target = [](double x, double y) { return log_mean(x, y); };
  it.measure = [](int m) { return log_mean_measure_rule(m); };
  it.layer_psd_size = 4;  // one 2x2 block per component
  it.emit_layer = [](LinearMatrixSystem& sys, const AffineSlot& u, const AffineSlot& v,
                     const std::string& prefix, int& psd_size) {
    AffineSlot s1 = emit_sqrt_slack(sys, u, v, prefix + "_s1");
    AffineSlot s2 = emit_sqrt_slack(sys, u, v, prefix + "_s2");
    psd_size += 4;
    return std::make_pair(half_sum(u, s1), half_sum(v, s2));
  };
  validate_functional_equation(it);
  return it;
}

MeanIteration agm_iteration() {
  MeanIteration it;
  it.name = "agm";
  it.h1 = [](double x) { return 0.5 * (x + 1.0); };
  it.h2 = [](double x) { return std::sqrt(x); };
  it.h1_at1 = 1.0;
  it.h2_at1 = 1.0;
  it.dh1_at1 = 0.5;
  it.dh2_at1 = 0.5;
  it.c = 2.0;
  it.c0 = 8.0;
  it.g0 = 0.0;
  it.g1 = 1.0;
  it.target = [](double x, double y) { return agm(x, y); };
  it.measure = [](int m) {
    return gauss_from_moments(agm_mu_moments(2 * m), m, "agm-measure");
  };
  it.layer_psd_size = 2;  // the arithmetic component is affine
  it.emit_layer = [](LinearMatrixSystem& sys, const AffineSlot& u, const AffineSlot& v,
                     const std::string& prefix, int& psd_size) {
    AffineSlot s = emit_sqrt_slack(sys, u, v, prefix + "_s");
    psd_size += 2;
    return std::make_pair(half_sum(u, v), s);
  };
  validate_functional_equation(it);
  return it;
}

double eval_rmk_phi(const MeanIteration& iter, int m, int k, double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw DomainError("eval_rmk_phi: arguments must be positive");
  for (int i = 0; i < k; ++i) {
    const double nx = iter.p_h1(x, y);
    const double ny = iter.p_h2(x, y);
    x = nx;
    y = ny;
  }
  RationalApproximant plus;
  plus.variant = Variant::positive;
  plus.rule = iter.measure(m);
  plus.g0 = iter.g0;
  plus.g1 = iter.g1;
  return y * eval_rm(plus, x / y);
}

double contraction_ratio(const MeanIteration& iter, double x, double y) {
  if (x == y) throw DomainError("contraction_ratio: undefined at x = y");
  const double num = std::abs(std::log(iter.p_h1(x, y) / iter.p_h2(x, y)));
  return num / std::abs(std::log(x / y));
}

double quadratic_ratio(const MeanIteration& iter, double x, double y) {
  if (x == y) throw DomainError("quadratic_ratio: undefined at x = y");
  const double num = std::abs(std::log(iter.p_h1(x, y) / iter.p_h2(x, y)));
  const double den = std::log(x / y);
  return num / (den * den);
}

FunceqParams choose_params_funceq(const MeanIteration& iter, double a, double eps) {
  if (!(a > 1.0)) throw DomainError("choose_params_funceq: a must exceed 1");
  if (!(eps > 0.0)) throw DomainError("choose_params_funceq: eps must be positive");
  const double b = iter.b_constant();
  const double lead = 8.0 * (iter.g1 - iter.g0) * (1.0 + a) / (3.0 * eps);
  const double logc = std::log(iter.c);
  auto log_base_c = [&](double v) { return std::log(v) / logc; };

  double k_target;
  if (iter.c0) {
    const double inner = std::log(lead) / std::log(*iter.c0);
    k_target = std::max(2.0 * log_base_c(std::log(a)),
                        inner > 1.0 ? 2.0 * std::log2(inner) : 0.0);
  } else {
    const double arg = log_base_c(lead);
    k_target = std::max(2.0 * log_base_c(std::log(a)), arg > 0.0 ? std::sqrt(arg) : 0.0);
  }
  int k = 0;
  while (static_cast<double>(k) < k_target) k += 2;

  double m_target;
  if (iter.c0) {
    m_target = std::max(1.0, k * std::log(b) / std::log(16.0 / *iter.c0));
  } else {
    m_target = k * std::max(1.0, std::log(b) / std::log(16.0));
  }
  FunceqParams p;
  p.k = k;
  p.m = std::max(1, static_cast<int>(std::ceil(m_target)));
  return p;
}

LinearMatrixSystem funceq_cone(const MeanIteration& iter, int m, int k) {
  if (m < 1 || k < 0) throw DomainError("funceq_cone: need m >= 1, k >= 0");
  LinearMatrixSystem sys;
  const int x = sys.add_variable("x", 1, false, VarRole::input);
  const int y = sys.add_variable("y", 1, false, VarRole::input);
  const int tau = sys.add_variable("tau", 1, false, VarRole::input);

  AffineSlot cur1 = sys.slot(x), cur2 = sys.slot(y);
  int psd_size = 0;
  for (int i = 0; i < k; ++i) {
    auto next = iter.emit_layer(sys, cur1, cur2, "L" + std::to_string(i + 1), psd_size);
    cur1 = next.first;
    cur2 = next.second;
  }

  // terminal hypograph of P_{r_m^+}(cur1, cur2):
  //   tau = g0 * cur2 + (g1 - g0) sum_j w_j tau_j,
  //   tau_j <= P_{f^+_{t_j}}(cur1, cur2) via [[v/t - tau_j, -tau_j],
  //                                           [-tau_j, u/(1-t) - tau_j]]
  QuadratureRule rule = iter.measure(m);
  std::vector<std::pair<double, AffineSlot>> eq;
  for (int j = 0; j < m; ++j) {
    const double t = rule.nodes[j];
    const int tj = sys.add_variable("tau" + std::to_string(j + 1), 1, false, VarRole::auxiliary);
    LmiBlock& blk = sys.new_block(2, "persp_plus" + std::to_string(j + 1));
    sys.place(blk, 0, 0, cur2, 1.0 / t);
    sys.place(blk, 0, 0, sys.slot(tj), -1.0);
    sys.place(blk, 0, 1, sys.slot(tj), -1.0);
    sys.place(blk, 1, 0, sys.slot(tj), -1.0);
    sys.place(blk, 1, 1, cur1, 1.0 / (1.0 - t));
    sys.place(blk, 1, 1, sys.slot(tj), -1.0);
    eq.push_back({(iter.g1 - iter.g0) * rule.weights[j], sys.slot(tj)});
    psd_size += 2;
  }
  if (iter.g0 != 0.0) eq.push_back({iter.g0, cur2});
  AffineSlot minus_tau = sys.slot(tau);
  for (auto& [v, c] : minus_tau.terms) c = -c;
  eq.push_back({1.0, minus_tau});
  sys.add_equality("target pairing", eq);

  if (psd_size != 2 * m + k * iter.layer_psd_size)
    throw Error("funceq_cone: block size accounting mismatch");
  sys.validate_structure();
  return sys;
}

HermitianMatrix log_mean_matrix(const HermitianMatrix& x, const HermitianMatrix& y) {
  return nc_perspective(&scalar_log_mean_target, x, y);
}

HermitianMatrix eval_rmk_phi_logmean_matrix(int m, int k, const HermitianMatrix& x,
                                            const HermitianMatrix& y) {
  HermitianMatrix cx = x, cy = y;
  for (int i = 0; i < k; ++i) {
    HermitianMatrix g = geometric_mean(cy, cx, 0.5);  // midpoint mean of the pair
    HermitianMatrix nx = 0.5 * (cx + g);
    HermitianMatrix ny = 0.5 * (cy + g);
    cx = nx;
    cy = ny;
  }
  RationalApproximant plus;
  plus.variant = Variant::positive;
  plus.rule = log_mean_measure_rule(m);
  plus.g0 = 0.0;
  plus.g1 = 1.0;
  return nc_perspective([&plus](double v) { return eval_rm(plus, v); }, cx, cy);
}

}  // namespace oprel
