#pragma once

#include "oprel/lmi.hpp"
#include "oprel/quadrature.hpp"
#include "oprel/scalar_approx.hpp"

namespace oprel {

// Hypograph of f_t at matrix dimension n: variables (X, T), one 2n x 2n block
//   [ X - I - T   -sqrt(t) T ]
//   [ -sqrt(t) T   I - t T   ]
// satisfied exactly by T = f_t(X) for positive definite X.
LinearMatrixSystem hypograph_ft(double t, int n);

// Perspective of f_t: variables (X, Y, T), block
//   [ X - Y - T   -sqrt(t) T ]
//   [ -sqrt(t) T   Y - t T   ]
// characterizing P_{f_t}(X, Y) >= T.
LinearMatrixSystem perspective_ft(double t, int n);

// Perspective of f_t^+ for t in (0,1): variables (X, Y, T), block
//   [ Y/t - T      -T       ]
//   [ -T       X/(1-t) - T  ]
// characterizing the weighted harmonic mean ((1-t) X^{-1} + t Y^{-1})^{-1} >= T.
LinearMatrixSystem perspective_ft_plus(double t, int n);

// Geometric mean chain: variables X, Y, V, Z_0..Z_k with Z_0 = Y, Z_k = V and
// blocks [[Z_i, Z_{i+1}],[Z_{i+1}, X]]; feasible iff X #_{2^-k} Y >= V.
LinearMatrixSystem geomean_chain(int k, int n);

// Handles into the auxiliaries a cone instantiation declared.
struct ConeHandles {
  std::vector<int> t_vars;  // T_1..T_m
  std::vector<int> z_vars;  // Z_0..Z_k
  QuadratureRule rule;
};

// Append the operator relative entropy block structure over the given slots:
// k geometric-mean blocks, m perspective blocks on the Gauss-Legendre rule,
// and the equality sum_j w_j T_j = -2^{-k} T. Auxiliaries are created with
// the given prefix.
ConeHandles append_op_rel_entr(LinearMatrixSystem& sys, const AffineSlot& x, const AffineSlot& y,
                               const AffineSlot& t, int m, int k, const std::string& prefix,
                               bool complex_aux);

// The operator relative entropy cone at dimension n with parameters (m, k):
// variables X, Y, T plus auxiliaries T_1..T_m, Z_0..Z_k.
LinearMatrixSystem op_rel_entr_epi_cone(int n, int m, int k, bool complex_vars = false);

// Matrix hypograph of r_{m,k}: variables (Y, U), feasible iff r_{m,k}(Y) >= U
// for positive definite Y (the cone with X = I and U = -T).
LinearMatrixSystem matrix_hypograph_rmk(int n, int m, int k, bool complex_vars = false);

// r_{m,k} applied spectrally.
double rmk_scalar(int m, int k, double x);

// P_{r_{m,k}}(Y, X) = X^{1/2} r_{m,k}(X^{-1/2} Y X^{-1/2}) X^{1/2}.
HermitianMatrix perspective_rmk(int m, int k, const HermitianMatrix& y, const HermitianMatrix& x);

// Constructive certificate for membership of (X, Y, -P_{r_{m,k}}(Y,X)):
// Z_0 = Y, Z_{i+1} = X #_{1/2} Z_i, T_j = P_{f_{t_j}}(Z_k, X).
MembershipCertificate build_certificate(const HermitianMatrix& x, const HermitianMatrix& y, int m,
                                        int k);

enum class MembershipMethod { certificate, oracle };

// Does (X, Y, T) lie in the (m,k) operator relative entropy cone? The oracle
// method tests -P_{r_{m,k}}(Y,X) <= T by matrix functions; the certificate
// method builds the proof auxiliaries, shifts them to account for T, and
// tests every block. Tolerance 1e-9, relative.
bool check_membership(const HermitianMatrix& x, const HermitianMatrix& y, const HermitianMatrix& t,
                      int m, int k, MembershipMethod method);

}  // namespace oprel
