#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "oprel/errors.hpp"

namespace oprel {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Value type, no views.
class CMat {
 public:
  CMat() : rows_(0), cols_(0) {}
  CMat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
  }
  CMat(int rows, int cols, std::initializer_list<cplx> vals) : CMat(rows, cols) {
    if (static_cast<int>(vals.size()) != rows * cols) throw ShapeError("initializer size mismatch");
    std::copy(vals.begin(), vals.end(), data_.begin());
  }

  static CMat identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMat zero(int r, int c) { return CMat(r, c); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  CMat& operator+=(const CMat& o) {
    check_same_shape(o);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CMat& operator-=(const CMat& o) {
    check_same_shape(o);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  CMat& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend CMat operator+(CMat a, const CMat& b) { return a += b; }
  friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
  friend CMat operator*(CMat a, cplx s) { return a *= s; }
  friend CMat operator*(cplx s, CMat a) { return a *= s; }

  friend CMat operator*(const CMat& a, const CMat& b) {
    if (a.cols_ != b.rows_) throw ShapeError("matrix product dimension mismatch");
    CMat c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int k = 0; k < a.cols_; ++k) {
        cplx aik = a(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  CMat adjoint() const {
    CMat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }
  CMat transpose() const {
    CMat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  CMat conjugate() const {
    CMat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = std::conj((*this)(i, j));
    return m;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = i; j < cols_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
  }

 private:
  void check_same_shape(const CMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix shape mismatch");
  }

  int rows_, cols_;
  std::vector<cplx> data_;
};

inline CMat kron(const CMat& a, const CMat& b) {
  CMat c(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      cplx aij = a(i, j);
      if (aij == 0.0) continue;
      for (int r = 0; r < b.rows(); ++r)
        for (int s = 0; s < b.cols(); ++s) c(i * b.rows() + r, j * b.cols() + s) = aij * b(r, s);
    }
  return c;
}

// Re Tr(A^* B), the real Frobenius pairing.
inline double re_inner(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("inner product shape mismatch");
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      s += std::real(std::conj(a(i, j)) * b(i, j));
  return s;
}

}  // namespace oprel
