#include "oprel/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace oprel {

namespace {

double offdiag_norm(const CMat& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

// Cyclic Jacobi with threshold sweeps. Each pivot (p, q) is first rotated by a
// diagonal phase so the off-diagonal entry becomes real nonnegative, then
// annihilated by a plane rotation.
EigDecomposition eig(const HermitianMatrix& m) {
  const int n = m.dim();
  CMat a = m.mat();
  CMat v = CMat::identity(n);

  const double norm = std::max(a.frobenius_norm(), 1e-300);
  const double stop = 1e-14 * norm;
  const double pivot_floor = 1e-18 * norm;
  const int max_sweeps = 30;

  if (n > 1) {
    int sweep = 0;
    while (offdiag_norm(a) > stop) {
      if (++sweep > max_sweeps) {
        std::ostringstream msg;
        msg << "Jacobi eigensolver did not converge in " << max_sweeps
            << " sweeps; off-diagonal residual " << offdiag_norm(a);
        throw ConvergenceError(msg.str(), offdiag_norm(a));
      }
      for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
          const cplx apq = a(p, q);
          const double mag = std::abs(apq);
          if (mag <= pivot_floor) continue;

          const cplx phase = apq / mag;  // e^{i phi}
          const double app = std::real(a(p, p));
          const double aqq = std::real(a(q, q));
          const double tau = (aqq - app) / (2.0 * mag);
          const double sgn = tau >= 0.0 ? 1.0 : -1.0;
          const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;

          // Columns p, q of the unitary J: J[p][p]=c, J[p][q]=s*phase,
          // J[q][p]=-s*conj(phase), J[q][q]=c.  Update A <- J* A J.
          for (int r = 0; r < n; ++r) {
            if (r == p || r == q) continue;
            const cplx arp = a(r, p);
            const cplx arq = a(r, q);
            a(r, p) = arp * c - arq * (s * std::conj(phase));
            a(r, q) = arp * (s * phase) + arq * c;
            a(p, r) = std::conj(a(r, p));
            a(q, r) = std::conj(a(r, q));
          }
          const double app_new = c * c * app - 2.0 * c * s * mag + s * s * aqq;
          const double aqq_new = s * s * app + 2.0 * c * s * mag + c * c * aqq;
          a(p, p) = app_new;
          a(q, q) = aqq_new;
          a(p, q) = 0.0;
          a(q, p) = 0.0;

          for (int r = 0; r < n; ++r) {
            const cplx vrp = v(r, p);
            const cplx vrq = v(r, q);
            v(r, p) = vrp * c - vrq * (s * std::conj(phase));
            v(r, q) = vrp * (s * phase) + vrq * c;
          }
        }
      }
    }
  }

  EigDecomposition d;
  d.eigenvalues.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = std::real(a(i, i));
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });

  d.eigenvectors = CMat(n, n);
  for (int j = 0; j < n; ++j) {
    d.eigenvalues[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) d.eigenvectors(i, j) = v(i, order[j]);
  }
  return d;
}

HermitianMatrix matrix_function(const HermitianMatrix& m, const std::function<double(double)>& f,
                                bool positive_domain) {
  EigDecomposition d = eig(m);
  if (positive_domain) {
    for (double lam : d.eigenvalues) {
      if (lam <= 0.0) {
        std::ostringstream msg;
        msg << "matrix_function: eigenvalue " << lam << " outside the positive domain";
        throw DomainError(msg.str());
      }
    }
  }
  const int n = m.dim();
  CMat scaled(n, n);
  for (int i = 0; i < n; ++i) {
    const double fv = f(d.eigenvalues[i]);
    for (int r = 0; r < n; ++r) scaled(r, i) = d.eigenvectors(r, i) * fv;
  }
  return HermitianMatrix(scaled * d.eigenvectors.adjoint());
}

double min_eigenvalue(const HermitianMatrix& m) { return eig(m).eigenvalues.front(); }

bool is_psd(const HermitianMatrix& m, double tol) {
  if (tol < 0.0) throw DomainError("is_psd: tolerance must be nonnegative");
  return min_eigenvalue(m) >= -tol * std::max(1.0, m.frobenius_norm());
}

bool is_positive_definite(const HermitianMatrix& m) { return min_eigenvalue(m) > 0.0; }

HermitianMatrix matrix_sqrt(const HermitianMatrix& m) {
  return matrix_function(m, [](double x) { return std::sqrt(x); }, true);
}

HermitianMatrix matrix_inv_sqrt(const HermitianMatrix& m) {
  return matrix_function(m, [](double x) { return 1.0 / std::sqrt(x); }, true);
}

HermitianMatrix matrix_log(const HermitianMatrix& m) {
  return matrix_function(m, [](double x) { return std::log(x); }, true);
}

HermitianMatrix matrix_pow(const HermitianMatrix& m, double p) {
  return matrix_function(m, [p](double x) { return std::pow(x, p); }, true);
}

HermitianMatrix geometric_mean(const HermitianMatrix& a, const HermitianMatrix& b, double h) {
  if (!(h > 0.0 && h < 1.0)) throw DomainError("geometric_mean: weight must lie in (0,1)");
  if (!is_positive_definite(a) || !is_positive_definite(b))
    throw DomainError("geometric_mean: inputs must be positive definite");
  HermitianMatrix ra = matrix_sqrt(a);
  HermitianMatrix ri = matrix_inv_sqrt(a);
  HermitianMatrix mid(ri.mat() * b.mat() * ri.mat());
  HermitianMatrix midp = matrix_pow(mid, h);
  return HermitianMatrix(ra.mat() * midp.mat() * ra.mat());
}

HermitianMatrix nc_perspective(const std::function<double(double)>& g, const HermitianMatrix& x,
                               const HermitianMatrix& y) {
  if (x.dim() != y.dim()) throw ShapeError("nc_perspective: dimension mismatch");
  if (!is_positive_definite(x) || !is_positive_definite(y))
    throw DomainError("nc_perspective: inputs must be positive definite");
  HermitianMatrix ys = matrix_sqrt(y);
  HermitianMatrix yi = matrix_inv_sqrt(y);
  HermitianMatrix mid(yi.mat() * x.mat() * yi.mat());
  HermitianMatrix gm = matrix_function(mid, g, true);
  return HermitianMatrix(ys.mat() * gm.mat() * ys.mat());
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(kron(a.mat(), b.mat()));
}

double phi_map(const HermitianMatrix& z) {
  const int nn = z.dim();
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(nn))));
  if (n * n != nn) throw ShapeError("phi_map: dimension is not a perfect square");
  // w has ones at positions j*(n+1), the column-stacked identity.
  cplx s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += z(i * (n + 1), j * (n + 1));
  return std::real(s);
}

}  // namespace oprel
