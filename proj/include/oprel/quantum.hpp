#pragma once

#include "oprel/cone_factory.hpp"
#include "oprel/compile.hpp"

namespace oprel {

// A Hermitian matrix with validated positivity / unit-trace flags.
struct DensityLikeMatrix {
  HermitianMatrix matrix{1};
  bool positive = false;
  bool unit_trace = false;

  static DensityLikeMatrix checked(const HermitianMatrix& h, bool require_positive,
                                   bool require_unit_trace);
};

// Tr[A (log A - log B)] by eigendecomposition.
double qre_oracle(const HermitianMatrix& a, const HermitianMatrix& b);

// -X^{1/2} log(X^{-1/2} Y X^{-1/2}) X^{1/2}
HermitianMatrix dop_oracle(const HermitianMatrix& x, const HermitianMatrix& y);

// | qre(A,B) - phi(Dop(A (x) I || I (x) conj(B))) |
double lift_identity_residual(const HermitianMatrix& a, const HermitianMatrix& b);

enum class QreMode { full, reduced };

// Epigraph of the quantum relative entropy: variables A, B (n x n) and tau
// (scalar); feasible iff tau is at least the (m,k)-approximate D(A||B). The
// full mode lifts to the operator cone at dimension n^2 with matrix
// auxiliaries T, T_j; the reduced mode replaces each perspective block by an
// (n^2+1)-sized scalar-hypograph block.
LinearMatrixSystem quantum_rel_entr_epigraph(int n, int m, int k, QreMode mode,
                                             bool complex_vars = true);

// Hypograph of the entropy -Tr[rho log rho]: variables rho, tau; feasible iff
// tau is at most the approximate entropy.
LinearMatrixSystem quantum_entr_hypograph(int n, int m, int k);

// Epigraph of rho -> Tr[sigma log rho] for fixed sigma >= 0: variables rho,
// tau; feasible iff tau <= Tr[sigma U] for some U <= r_{m,k}(rho).
LinearMatrixSystem trace_logm_epigraph(const HermitianMatrix& sigma, int n, int m, int k);

// Feasible-tau boundary of a (rho/tau or A/B/tau) system located by bisection
// over phase-1 solves; `fixings` carries everything except tau.
double tau_boundary(const LinearMatrixSystem& sys, const Assignment& fixings, double lo, double hi,
                    double bisect_tol = 1e-7, const SolveOptions& opts = {});

}  // namespace oprel
