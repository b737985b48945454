#include "doctest.h"

#include <cmath>

#include "oprel/hermitian.hpp"
#include "oprel/rng.hpp"

using namespace oprel;

namespace {

double reconstruction_error(const HermitianMatrix& m, const EigDecomposition& d) {
  const int n = m.dim();
  CMat scaled(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) scaled(i, j) = d.eigenvectors(i, j) * d.eigenvalues[j];
  CMat rec = scaled * d.eigenvectors.adjoint();
  return (rec - m.mat()).frobenius_norm() / std::max(1e-300, m.frobenius_norm());
}

}  // namespace

TEST_SUITE_BEGIN("hermitian");

TEST_CASE("construction symmetrizes and validates") {
  CMat m(2, 2, {cplx(1, 0), cplx(2, 1), cplx(0, 0), cplx(3, 0)});
  HermitianMatrix h(m);
  CHECK(h(0, 1) == std::conj(h(1, 0)));
  CHECK_THROWS_AS(HermitianMatrix(CMat(2, 3)), ShapeError);
}

TEST_CASE("eig identity and diagonal") {
  EigDecomposition d = eig(HermitianMatrix::identity(3));
  for (double lam : d.eigenvalues) CHECK(lam == doctest::Approx(1.0).epsilon(1e-14));

  EigDecomposition d2 = eig(HermitianMatrix::diagonal({3, 1, 2}));
  CHECK(d2.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(d2.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(d2.eigenvalues[2] == doctest::Approx(3.0));
}

TEST_CASE("eig reconstruction and unitarity on random input") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    HermitianMatrix h = rng.hermitian(6);
    EigDecomposition d = eig(h);
    CHECK(reconstruction_error(h, d) <= 1e-12);
    CMat utu = d.eigenvectors.adjoint() * d.eigenvectors;
    CHECK((utu - CMat::identity(6)).max_abs() <= 1e-12);
    for (size_t i = 1; i < d.eigenvalues.size(); ++i)
      CHECK(d.eigenvalues[i - 1] <= d.eigenvalues[i]);
  }
}

TEST_CASE("eig is deterministic") {
  Rng rng(11);
  HermitianMatrix h = rng.hermitian(5);
  EigDecomposition a = eig(h), b = eig(h);
  for (int i = 0; i < 5; ++i) CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
  CHECK((a.eigenvectors - b.eigenvectors).max_abs() == 0.0);
}

TEST_CASE("matrix_function basics") {
  HermitianMatrix id3 = HermitianMatrix::identity(3);
  HermitianMatrix lg = matrix_function(id3, [](double x) { return std::log(x); }, true);
  CHECK(lg.mat().max_abs() <= 1e-14);

  HermitianMatrix d = HermitianMatrix::diagonal({1, 4});
  HermitianMatrix rt = matrix_function(d, [](double x) { return std::sqrt(x); }, true);
  CHECK(std::real(rt(0, 0)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::real(rt(1, 1)) == doctest::Approx(2.0).epsilon(1e-13));

  Rng rng(3);
  HermitianMatrix p = rng.positive_definite(4);
  HermitianMatrix same = matrix_function(p, [](double x) { return x; });
  CHECK((same.mat() - p.mat()).frobenius_norm() <= 1e-12 * p.frobenius_norm());

  // commutes with the argument
  HermitianMatrix f = matrix_function(p, [](double x) { return std::exp(-x); });
  CMat comm = f.mat() * p.mat() - p.mat() * f.mat();
  CHECK(comm.frobenius_norm() <= 1e-10 * p.frobenius_norm());
}

TEST_CASE("matrix_function maps the spectrum") {
  Rng rng(5);
  HermitianMatrix p = rng.positive_definite(5);
  auto f = [](double x) { return std::log(x); };
  EigDecomposition before = eig(p);
  EigDecomposition after = eig(matrix_function(p, f, true));
  for (int i = 0; i < 5; ++i)
    CHECK(after.eigenvalues[i] == doctest::Approx(f(before.eigenvalues[i])).epsilon(1e-12));
}

TEST_CASE("matrix_function rejects out-of-domain spectra") {
  HermitianMatrix d = HermitianMatrix::diagonal({1.0, -0.5});
  CHECK_THROWS_AS(matrix_function(d, [](double x) { return std::log(x); }, true), DomainError);
}

TEST_CASE("is_psd") {
  CHECK(is_psd(HermitianMatrix::identity(2), 0.0));
  CHECK_FALSE(is_psd(HermitianMatrix::diagonal({1, -1}), 1e-9));

  // boundary 2x2 block of the f_t hypograph at x=2, t=1/2, tau=f_{1/2}(2)=2/3
  const double x = 2.0, t = 0.5, tau = 2.0 / 3.0;
  CMat blk(2, 2,
           {cplx(x - 1.0 - tau, 0), cplx(-std::sqrt(t) * tau, 0), cplx(-std::sqrt(t) * tau, 0),
            cplx(1.0 - t * tau, 0)});
  CHECK(is_psd(HermitianMatrix(blk), 1e-9));
}

TEST_CASE("geometric_mean") {
  Rng rng(13);
  HermitianMatrix a = rng.positive_definite(3);
  for (double h : {0.5, 0.25, 0.75}) {
    HermitianMatrix g = geometric_mean(a, a, h);
    CHECK((g.mat() - a.mat()).frobenius_norm() <= 1e-11 * a.frobenius_norm());
  }

  HermitianMatrix s4 = HermitianMatrix::diagonal({4});
  HermitianMatrix s9 = HermitianMatrix::diagonal({9});
  CHECK(std::real(geometric_mean(s4, s9, 0.5)(0, 0)) == doctest::Approx(6.0).epsilon(1e-13));

  HermitianMatrix b = rng.positive_definite(3);
  // symmetry (A,B,h) <-> (B,A,1-h)
  HermitianMatrix g1 = geometric_mean(a, b, 0.25);
  HermitianMatrix g2 = geometric_mean(b, a, 0.75);
  CHECK((g1.mat() - g2.mat()).frobenius_norm() <= 1e-10 * (1.0 + g1.frobenius_norm()));

  // nesting: A #_{1/4} B = A #_{1/2} (A #_{1/2} B)
  HermitianMatrix nested = geometric_mean(a, geometric_mean(a, b, 0.5), 0.5);
  CHECK((g1.mat() - nested.mat()).frobenius_norm() <= 1e-10 * (1.0 + g1.frobenius_norm()));

  CHECK_THROWS_AS(geometric_mean(HermitianMatrix::diagonal({1, -1}), a, 0.5), DomainError);
}

TEST_CASE("geometric mean block characterization") {
  Rng rng(17);
  HermitianMatrix a = rng.positive_definite(3);
  HermitianMatrix b = rng.positive_definite(3);
  HermitianMatrix t = geometric_mean(a, b, 0.5);
  const int n = 3;
  CMat blk(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      blk(i, j) = a(i, j);
      blk(i, n + j) = t(i, j);
      blk(n + i, j) = t(i, j);
      blk(n + i, n + j) = b(i, j);
    }
  HermitianMatrix block(blk);
  CHECK(min_eigenvalue(block) >= -1e-9 * std::max(1.0, block.frobenius_norm()));
}

TEST_CASE("nc_perspective") {
  Rng rng(23);
  HermitianMatrix x = rng.positive_definite(3);
  auto log_fn = [](double v) { return std::log(v); };

  HermitianMatrix zero = nc_perspective(log_fn, x, x);
  CHECK(zero.mat().frobenius_norm() <= 1e-10 * x.frobenius_norm());

  HermitianMatrix se = HermitianMatrix::diagonal({std::exp(1.0)});
  HermitianMatrix s1 = HermitianMatrix::diagonal({1.0});
  CHECK(std::real(nc_perspective(log_fn, se, s1)(0, 0)) == doctest::Approx(1.0).epsilon(1e-13));

  // scalar case reduces to y g(x/y)
  HermitianMatrix sx = HermitianMatrix::diagonal({3.7}), sy = HermitianMatrix::diagonal({1.9});
  CHECK(std::real(nc_perspective(log_fn, sx, sy)(0, 0)) ==
        doctest::Approx(1.9 * std::log(3.7 / 1.9)).epsilon(1e-12));

  // sqrt perspective is the midpoint geometric mean with swapped arguments
  HermitianMatrix y = rng.positive_definite(3);
  HermitianMatrix p = nc_perspective([](double v) { return std::sqrt(v); }, x, y);
  HermitianMatrix g = geometric_mean(y, x, 0.5);
  CHECK((p.mat() - g.mat()).frobenius_norm() <= 1e-10 * (1.0 + g.frobenius_norm()));

  // positive homogeneity
  HermitianMatrix pc = nc_perspective(log_fn, 2.5 * x, 2.5 * y);
  HermitianMatrix p1 = nc_perspective(log_fn, x, y);
  CHECK((pc.mat() - (2.5 * p1).mat()).frobenius_norm() <= 1e-12 * (1.0 + pc.frobenius_norm()) * 10);

  CHECK_THROWS_AS(nc_perspective(log_fn, HermitianMatrix::diagonal({-1.0}), s1), DomainError);
}

TEST_CASE("kron and phi_map") {
  CHECK(phi_map(HermitianMatrix::identity(4)) == doctest::Approx(2.0));

  Rng rng(29);
  HermitianMatrix x = rng.hermitian(3);
  HermitianMatrix y = rng.hermitian(3);
  double lhs = phi_map(kron(x, y));
  double rhs = std::real((x.mat() * y.mat().transpose()).trace());
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));

  HermitianMatrix z = rng.positive_definite(4);  // dim 4 = 2^2
  CHECK(phi_map(z) >= 0.0);

  CHECK_THROWS_AS(phi_map(HermitianMatrix::identity(3)), ShapeError);
}

TEST_SUITE_END();
