#pragma once

#include <functional>
#include <vector>

#include "oprel/complex_matrix.hpp"

namespace oprel {

// Dense complex Hermitian matrix. Construction symmetrizes, so the invariant
// entries[i][j] == conj(entries[j][i]) holds exactly.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMat& m) : mat_(symmetrize(m)) {}
  explicit HermitianMatrix(int n) : mat_(CMat::zero(n, n)) {
    if (n < 1) throw ShapeError("HermitianMatrix dimension must be >= 1");
  }

  static HermitianMatrix identity(int n) { return HermitianMatrix(CMat::identity(n)); }
  static HermitianMatrix diagonal(const std::vector<double>& d) {
    CMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return HermitianMatrix(m);
  }

  int dim() const { return mat_.rows(); }
  const CMat& mat() const { return mat_; }
  cplx operator()(int i, int j) const { return mat_(i, j); }

  double frobenius_norm() const { return mat_.frobenius_norm(); }
  double trace() const { return std::real(mat_.trace()); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.mat_ + b.mat_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix(a.mat_ - b.mat_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    return HermitianMatrix(a.mat_ * cplx(s, 0.0));
  }

 private:
  static CMat symmetrize(const CMat& m) {
    if (m.rows() != m.cols()) throw ShapeError("HermitianMatrix requires a square matrix");
    if (m.rows() < 1) throw ShapeError("HermitianMatrix dimension must be >= 1");
    CMat h(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
  }

  CMat mat_;
};

// Eigenvalues in nondecreasing order; eigenvectors e unitary with columns
// matching the eigenvalue order, so M = U diag(lambda) U*.
struct EigDecomposition {
  std::vector<double> eigenvalues;
  CMat eigenvectors;
};

EigDecomposition eig(const HermitianMatrix& m);

// U f(lambda) U*. With positive_domain set, any eigenvalue <= 0 raises
// DomainError naming the offending eigenvalue.
HermitianMatrix matrix_function(const HermitianMatrix& m, const std::function<double(double)>& f,
                                bool positive_domain = false);

double min_eigenvalue(const HermitianMatrix& m);

// lambda_min(M) >= -tol * max(1, ||M||_F)
bool is_psd(const HermitianMatrix& m, double tol);

bool is_positive_definite(const HermitianMatrix& m);

HermitianMatrix matrix_sqrt(const HermitianMatrix& m);
HermitianMatrix matrix_inv_sqrt(const HermitianMatrix& m);
HermitianMatrix matrix_log(const HermitianMatrix& m);
HermitianMatrix matrix_pow(const HermitianMatrix& m, double p);

// A^{1/2} (A^{-1/2} B A^{-1/2})^h A^{1/2} for A, B > 0 and 0 < h < 1.
HermitianMatrix geometric_mean(const HermitianMatrix& a, const HermitianMatrix& b, double h);

// P_g(X, Y) = Y^{1/2} g(Y^{-1/2} X Y^{-1/2}) Y^{1/2} for X, Y > 0.
HermitianMatrix nc_perspective(const std::function<double(double)>& g, const HermitianMatrix& x,
                               const HermitianMatrix& y);

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

// w* Z w with w the column-stacked n x n identity; Z must be n^2 x n^2.
double phi_map(const HermitianMatrix& z);

}  // namespace oprel
