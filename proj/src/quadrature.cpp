#include "oprel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "oprel/hermitian.hpp"

namespace oprel {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

// Nodes/weights from a symmetric tridiagonal Jacobi matrix with diagonal
// alpha[0..m-1], off-diagonal sqrt(beta[1..m-1]) and total mass beta0.
QuadratureRule jacobi_to_rule(const std::vector<double>& alpha, const std::vector<double>& beta,
                              double beta0, const std::string& tag) {
  const int m = static_cast<int>(alpha.size());
  CMat j(m, m);
  for (int i = 0; i < m; ++i) j(i, i) = alpha[i];
  for (int i = 0; i + 1 < m; ++i) {
    if (beta[i + 1] <= 0.0)
      throw NumericalError("quadrature recurrence breakdown: nonpositive beta coefficient");
    const double off = std::sqrt(beta[i + 1]);
    j(i, i + 1) = off;
    j(i + 1, i) = off;
  }
  EigDecomposition d = eig(HermitianMatrix(j));

  QuadratureRule rule;
  rule.order = m;
  rule.measure_tag = tag;
  rule.nodes = d.eigenvalues;
  rule.weights.resize(m);
  for (int k = 0; k < m; ++k) rule.weights[k] = beta0 * std::norm(d.eigenvectors(0, k));
  return rule;
}

// GL nodes/weights on [-1,1], used for the composite fine grids.
void base_gl(int q, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> alpha(q, 0.0), beta(q, 0.0);
  for (int k = 1; k < q; ++k) beta[k] = k * k / (4.0 * k * k - 1.0);
  QuadratureRule r = jacobi_to_rule(alpha, beta, 2.0, "gl-base");
  x = r.nodes;
  w = r.weights;
}

}  // namespace

QuadratureRule gauss_legendre(int m) {
  if (m < 1) throw DomainError("gauss_legendre: order must be >= 1");
  // Monic shifted-Legendre recurrence on [0,1].
  std::vector<double> alpha(m, 0.5), beta(m, 0.0);
  for (int k = 1; k < m; ++k) beta[k] = k * k / (4.0 * (4.0 * k * k - 1.0));
  return jacobi_to_rule(alpha, beta, 1.0, "legendre01");
}

QuadratureRule gauss_arcsine(int m) {
  if (m < 1) throw DomainError("gauss_arcsine: order must be >= 1");
  QuadratureRule rule;
  rule.order = m;
  rule.measure_tag = "arcsine";
  rule.nodes.resize(m);
  rule.weights.assign(m, 1.0 / m);
  for (int j = 1; j <= m; ++j)
    rule.nodes[m - j] = 0.5 * (1.0 + std::cos((2.0 * j - 1.0) * kPi / (2.0 * m)));
  return rule;
}

double arcsine_density(double t) { return 1.0 / (kPi * std::sqrt(t * (1.0 - t))); }

double log_mean_measure_density(double t) {
  const double u = std::log((1.0 - t) / t);
  return 1.0 / (t * (1.0 - t) * (kPi * kPi + u * u));
}

FineRule graded_fine_rule(const std::function<double(double)>& density, int min_points) {
  // Panel boundaries 2^-52, ..., 1/4, 1/2, 3/4, ..., 1 - 2^-52. Deeper cuts
  // near 1 are not representable in double precision.
  const int levels = 52;
  std::vector<double> cuts;
  cuts.push_back(0.0);
  for (int l = levels; l >= 2; --l) cuts.push_back(std::ldexp(1.0, -l));
  cuts.push_back(0.5);
  for (int l = 2; l <= levels; ++l) cuts.push_back(1.0 - std::ldexp(1.0, -l));
  cuts.push_back(1.0);

  const int panels = static_cast<int>(cuts.size()) - 1;
  const int q = std::max(6, (min_points + panels - 1) / panels);
  std::vector<double> bx, bw;
  base_gl(q, bx, bw);

  FineRule fine;
  fine.nodes.reserve(static_cast<size_t>(panels) * q);
  fine.weights.reserve(static_cast<size_t>(panels) * q);
  // Largest double below 1; samples are clamped into the open interval.
  const double t_hi = 1.0 - std::ldexp(1.0, -53);
  const double t_lo = 1e-300;
  for (int p = 0; p < panels; ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < q; ++i) {
      const double t = std::min(std::max(mid + half * bx[i], t_lo), t_hi);
      const double dens = density(t);
      if (!(dens > 0.0)) {
        std::ostringstream msg;
        msg << "gauss_from_density: nonpositive density sample " << dens << " at t=" << t;
        throw DomainError(msg.str());
      }
      fine.nodes.push_back(t);
      fine.weights.push_back(half * bw[i] * dens);
    }
  }
  return fine;
}

QuadratureRule gauss_from_fine_rule(const FineRule& fine, int m, const std::string& tag,
                                    bool probability) {
  const int nf = static_cast<int>(fine.nodes.size());
  if (m < 1) throw DomainError("gauss_from_fine_rule: order must be >= 1");
  if (nf < 2 * m) throw DomainError("gauss_from_fine_rule: fine rule too small");

  // Stieltjes three-term recurrence against the discrete measure.
  std::vector<double> alpha(m), beta(m, 0.0);
  std::vector<double> p_prev(nf, 0.0), p_cur(nf, 1.0);
  double mass = std::accumulate(fine.weights.begin(), fine.weights.end(), 0.0);
  if (mass <= 0.0) throw NumericalError("gauss_from_fine_rule: nonpositive total mass");

  double norm_cur = mass;
  for (int k = 0; k < m; ++k) {
    double xs = 0.0;
    for (int i = 0; i < nf; ++i) xs += fine.weights[i] * fine.nodes[i] * p_cur[i] * p_cur[i];
    alpha[k] = xs / norm_cur;
    if (k + 1 < m) {
      std::vector<double> p_next(nf);
      for (int i = 0; i < nf; ++i)
        p_next[i] = (fine.nodes[i] - alpha[k]) * p_cur[i] - (k > 0 ? beta[k] : 0.0) * p_prev[i];
      double norm_next = 0.0;
      for (int i = 0; i < nf; ++i) norm_next += fine.weights[i] * p_next[i] * p_next[i];
      if (!(norm_next > 0.0))
        throw NumericalError("gauss_from_fine_rule: recurrence breakdown (nonpositive norm)");
      beta[k + 1] = norm_next / norm_cur;
      p_prev.swap(p_cur);
      p_cur.swap(p_next);
      norm_cur = norm_next;
    }
  }

  QuadratureRule rule = jacobi_to_rule(alpha, beta, mass, tag);
  if (probability) {
    rule.mass_deviation = std::abs(mass - 1.0);
    for (double& w : rule.weights) w /= mass;
  }
  return rule;
}

QuadratureRule gauss_from_density(const std::function<double(double)>& density, int m,
                                  int discretization) {
  if (m < 1) throw DomainError("gauss_from_density: order must be >= 1");
  int n = discretization > 0 ? discretization : 256 * m;
  if (n < 64 * m) throw DomainError("gauss_from_density: discretization must be >= 64 m");
  FineRule fine = graded_fine_rule(density, n);
  return gauss_from_fine_rule(fine, m, "density", true);
}

QuadratureRule gauss_from_moments(const std::vector<double>& moments, int m,
                                  const std::string& tag) {
  if (m < 1) throw DomainError("gauss_from_moments: order must be >= 1");
  if (static_cast<int>(moments.size()) < 2 * m)
    throw DomainError("gauss_from_moments: need 2m moments");

  // Chebyshev algorithm for the recurrence coefficients.
  std::vector<double> alpha(m), beta(m, 0.0);
  alpha[0] = moments[1] / moments[0];
  if (m > 1) {
    std::vector<std::vector<double>> sigma(m + 1, std::vector<double>(2 * m, 0.0));
    for (int l = 0; l < 2 * m; ++l) sigma[1][l] = moments[l];
    for (int k = 1; k < m; ++k) {
      for (int l = k; l < 2 * m - k; ++l) {
        sigma[k + 1][l] = sigma[k][l + 1] - alpha[k - 1] * sigma[k][l] -
                          (k > 1 ? beta[k - 1] * sigma[k - 1][l] : 0.0);
      }
      if (!(sigma[k + 1][k] > 0.0) || !(sigma[k][k - 1] > 0.0))
        throw NumericalError("gauss_from_moments: recurrence breakdown (nonpositive sigma)");
      alpha[k] = sigma[k + 1][k + 1] / sigma[k + 1][k] - sigma[k][k] / sigma[k][k - 1];
      beta[k] = sigma[k + 1][k] / sigma[k][k - 1];
    }
  }
  return jacobi_to_rule(alpha, beta, moments[0], tag);
}

FineRule log_mean_fine_rule(int m) {
  if (m < 1) throw DomainError("log_mean_fine_rule: order must be >= 1");
  // Uniform panels in v over (-pi/2, pi/2); t(v) = 1 / (1 + e^{pi tan v}).
  const int panels = std::max(64, 16 * m);
  const int q = 10;
  std::vector<double> bx, bw;
  base_gl(q, bx, bw);
  FineRule fine;
  const double lo = -0.5 * kPi, hi = 0.5 * kPi;
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (int i = 0; i < q; ++i) {
      const double v = mid + 0.5 * h * bx[i];
      const double tanv = std::tan(v);
      double t = 1.0 / (1.0 + std::exp(kPi * tanv));
      // Clamp double-exponential underflow into the open interval.
      t = std::min(std::max(t, 1e-300), 1.0 - 1e-16);
      fine.nodes.push_back(t);
      fine.weights.push_back(0.5 * h * bw[i] / kPi);
    }
  }
  return fine;
}

QuadratureRule log_mean_measure_rule(int m) {
  return gauss_from_fine_rule(log_mean_fine_rule(m), m, "log-mean-measure", true);
}

}  // namespace oprel
