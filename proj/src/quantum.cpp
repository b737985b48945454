#include "oprel/quantum.hpp"

#include <cmath>
#include <sstream>

namespace oprel {

namespace {

// Kronecker placements for the lifted arguments. Entries of A (x) I:
// (i n + r, j n + r) = A[i][j]; entries of I (x) conj(B): (i n + r, i n + s) =
// conj(B[r][s]) = B[s][r].
void place_kron_left(LmiBlock& blk, int cell_r, int cell_c, int var, int n, double mult) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < n; ++r)
        blk.add_term(cell_r * n * n + i * n + r, cell_c * n * n + j * n + r, var, i, j, mult);
}

void place_kron_right_conj(LmiBlock& blk, int cell_r, int cell_c, int var, int n, double mult) {
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s)
        blk.add_term(cell_r * n * n + i * n + r, cell_c * n * n + i * n + s, var, s, r, mult);
}

// (A (x) I) w with w the column-stacked identity: the (i n + r)-th entry is
// A[i][r]; placed into column `col` of the block.
void place_kron_left_w(LmiBlock& blk, int row0, int col, int var, int n, double mult) {
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < n; ++r) {
      blk.add_term(row0 + i * n + r, col, var, i, r, mult);
    }
}

}  // namespace

DensityLikeMatrix DensityLikeMatrix::checked(const HermitianMatrix& h, bool require_positive,
                                             bool require_unit_trace) {
  DensityLikeMatrix d;
  d.matrix = h;
  if (require_positive) {
    const double lam = min_eigenvalue(h);
    if (lam <= 0.0) {
      std::ostringstream msg;
      msg << "DensityLikeMatrix: matrix is not positive definite (lambda_min = " << lam << ")";
      throw DomainError(msg.str());
    }
    d.positive = true;
  }
  if (require_unit_trace) {
    const double tr = h.trace();
    if (std::abs(tr - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg << "DensityLikeMatrix: trace " << tr << " differs from 1";
      throw DomainError(msg.str());
    }
    d.unit_trace = true;
  }
  return d;
}

double qre_oracle(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("qre_oracle: dimension mismatch");
  if (!is_positive_definite(a) || !is_positive_definite(b))
    throw DomainError("qre_oracle: inputs must be positive definite");
  EigDecomposition da = eig(a);
  double term = 0.0;
  for (double lam : da.eigenvalues) term += lam * std::log(lam);
  HermitianMatrix logb = matrix_log(b);
  return term - re_inner(a.mat(), logb.mat());
}

HermitianMatrix dop_oracle(const HermitianMatrix& x, const HermitianMatrix& y) {
  return -1.0 * nc_perspective([](double v) { return std::log(v); }, y, x);
}

double lift_identity_residual(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw ShapeError("lift_identity_residual: dimension mismatch");
  HermitianMatrix ident = HermitianMatrix::identity(a.dim());
  HermitianMatrix lifted_a = kron(a, ident);
  HermitianMatrix lifted_b = kron(ident, HermitianMatrix(b.mat().conjugate()));
  const double lifted = phi_map(dop_oracle(lifted_a, lifted_b));
  return std::abs(qre_oracle(a, b) - lifted);
}

LinearMatrixSystem quantum_rel_entr_epigraph(int n, int m, int k, QreMode mode,
                                             bool complex_vars) {
  if (n < 1 || m < 1 || k < 0) throw DomainError("quantum_rel_entr_epigraph: bad parameters");
  LinearMatrixSystem sys;
  const int nn = n * n;
  const int a = sys.add_variable("A", n, complex_vars, VarRole::input);
  const int b = sys.add_variable("B", n, complex_vars, VarRole::input);
  const int tau = sys.add_variable("tau", 1, false, VarRole::input);
  QuadratureRule rule = gauss_legendre(m);

  // geometric mean chain at dimension n^2; Z_0 = I (x) conj(B) stays inline
  std::vector<int> z(k + 1, -1);
  for (int i = 1; i <= k; ++i)
    z[i] = sys.add_variable("Z" + std::to_string(i), nn, complex_vars, VarRole::auxiliary);
  for (int i = 0; i < k; ++i) {
    LmiBlock& blk = sys.new_block(2 * nn, "geomean" + std::to_string(i));
    if (i == 0)
      place_kron_right_conj(blk, 0, 0, b, n, 1.0);
    else
      sys.place(blk, 0, 0, sys.slot(z[i]), 1.0);
    sys.place(blk, 0, 1, sys.slot(z[i + 1]), 1.0);
    sys.place(blk, 1, 0, sys.slot(z[i + 1]), 1.0);
    place_kron_left(blk, 1, 1, a, n, 1.0);
  }
  // the last chain element, used by the perspective blocks
  auto place_zk = [&](LmiBlock& blk, int cell_r, int cell_c, double mult) {
    if (k == 0)
      place_kron_right_conj(blk, cell_r, cell_c, b, n, mult);
    else
      sys.place(blk, cell_r, cell_c, sys.slot(z[k]), mult);
  };

  if (mode == QreMode::full) {
    const int t = sys.add_variable("T", nn, complex_vars, VarRole::auxiliary);
    std::vector<int> tj(m);
    std::vector<std::pair<double, AffineSlot>> eq;
    for (int j = 0; j < m; ++j) {
      tj[j] = sys.add_variable("T" + std::to_string(j + 1), nn, complex_vars, VarRole::auxiliary);
      const double node = rule.nodes[j];
      LmiBlock& blk = sys.new_block(2 * nn, "persp" + std::to_string(j + 1));
      place_zk(blk, 0, 0, 1.0);
      place_kron_left(blk, 0, 0, a, n, -1.0);
      sys.place(blk, 0, 0, sys.slot(tj[j]), -1.0);
      sys.place(blk, 0, 1, sys.slot(tj[j]), -std::sqrt(node));
      sys.place(blk, 1, 0, sys.slot(tj[j]), -std::sqrt(node));
      place_kron_left(blk, 1, 1, a, n, 1.0);
      sys.place(blk, 1, 1, sys.slot(tj[j]), -node);
      eq.push_back({rule.weights[j], sys.slot(tj[j])});
    }
    eq.push_back({std::ldexp(1.0, -k), sys.slot(t)});
    sys.add_equality("sum_wT=-2^-k T", eq);

    // phi(T) = tau; phi(Z) = w* Z w with w the column-stacked identity
    ScalarEquality phi;
    phi.label = "phi(T)=tau";
    CMat w_pattern(nn, nn);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w_pattern(i * (n + 1), j * (n + 1)) = 1.0;
    phi.pairings.push_back({t, w_pattern});
    CMat minus_one(1, 1);
    minus_one(0, 0) = -1.0;
    phi.pairings.push_back({tau, minus_one});
    sys.scalar_equalities.push_back(std::move(phi));
  } else {
    // reduced: scalar hypograph tau_j <= w* P_{f_t}(Z_k, A (x) I) w via the
    // (n^2+1)-sized block [[Y'+t(X'-Y'), Y'w],[w*Y', w*Y'w - t tau_j]]
    std::vector<std::pair<double, AffineSlot>> eq;
    for (int j = 0; j < m; ++j) {
      const int tj = sys.add_variable("tau" + std::to_string(j + 1), 1, false, VarRole::auxiliary);
      const double node = rule.nodes[j];
      LmiBlock& blk = sys.new_block(nn + 1, "persp_reduced" + std::to_string(j + 1));
      // top-left cell: (1 - t) A (x) I + t Z_k
      place_kron_left(blk, 0, 0, a, n, 1.0 - node);
      place_zk(blk, 0, 0, node);
      // border: (A (x) I) w and its adjoint
      place_kron_left_w(blk, 0, nn, a, n, 1.0);
      for (int i = 0; i < n; ++i)
        for (int r = 0; r < n; ++r) blk.add_term(nn, i * n + r, a, r, i, 1.0);
      // corner: Tr A - t tau_j
      for (int i = 0; i < n; ++i) blk.add_term(nn, nn, a, i, i, 1.0);
      blk.add_term(nn, nn, tj, 0, 0, -node);
      eq.push_back({rule.weights[j], sys.slot(tj)});
    }
    eq.push_back({std::ldexp(1.0, -k), sys.slot(tau)});
    sys.add_equality("sum_w_tau=-2^-k tau", eq);
  }
  sys.validate_structure();
  return sys;
}

LinearMatrixSystem quantum_entr_hypograph(int n, int m, int k) {
  if (n < 1 || m < 1 || k < 0) throw DomainError("quantum_entr_hypograph: bad parameters");
  LinearMatrixSystem sys;
  const int rho = sys.add_variable("rho", n, true, VarRole::input);
  const int tau = sys.add_variable("tau", 1, false, VarRole::input);
  QuadratureRule rule = gauss_legendre(m);
  AffineSlot ident = AffineSlot::make_const(CMat::identity(n));

  // cone triple (rho, I, T) with T eliminated through tau = -Tr T
  std::vector<AffineSlot> z(k + 1, ident);  // Z_0 = I
  for (int i = 1; i <= k; ++i)
    z[i] = sys.slot(sys.add_variable("Z" + std::to_string(i), n, true, VarRole::auxiliary));
  for (int i = 0; i < k; ++i) {
    LmiBlock& blk = sys.new_block(2 * n, "geomean" + std::to_string(i));
    sys.place(blk, 0, 0, z[i], 1.0);
    sys.place(blk, 0, 1, z[i + 1], 1.0);
    sys.place(blk, 1, 0, z[i + 1], 1.0);
    sys.place(blk, 1, 1, sys.slot(rho), 1.0);
  }

  ScalarEquality trace_eq;  // sum_j w_j Tr T_j = 2^{-k} tau
  trace_eq.label = "entropy pairing";
  for (int j = 0; j < m; ++j) {
    const int tj = sys.add_variable("T" + std::to_string(j + 1), n, true, VarRole::auxiliary);
    const double node = rule.nodes[j];
    LmiBlock& blk = sys.new_block(2 * n, "persp" + std::to_string(j + 1));
    sys.place(blk, 0, 0, z[k], 1.0);
    sys.place(blk, 0, 0, sys.slot(rho), -1.0);
    sys.place(blk, 0, 0, sys.slot(tj), -1.0);
    sys.place(blk, 0, 1, sys.slot(tj), -std::sqrt(node));
    sys.place(blk, 1, 0, sys.slot(tj), -std::sqrt(node));
    sys.place(blk, 1, 1, sys.slot(rho), 1.0);
    sys.place(blk, 1, 1, sys.slot(tj), -node);
    trace_eq.pairings.push_back({tj, CMat::identity(n) * cplx(rule.weights[j], 0.0)});
  }
  CMat neg(1, 1);
  neg(0, 0) = -std::ldexp(1.0, -k);
  trace_eq.pairings.push_back({tau, neg});
  sys.scalar_equalities.push_back(std::move(trace_eq));
  sys.validate_structure();
  return sys;
}

LinearMatrixSystem trace_logm_epigraph(const HermitianMatrix& sigma, int n, int m, int k) {
  if (sigma.dim() != n) throw ShapeError("trace_logm_epigraph: sigma dimension mismatch");
  if (!is_psd(sigma, 1e-12)) throw DomainError("trace_logm_epigraph: sigma is not PSD");
  LinearMatrixSystem sys;
  const int rho = sys.add_variable("rho", n, true, VarRole::input);
  const int tau = sys.add_variable("tau", 1, false, VarRole::input);
  const int u = sys.add_variable("U", n, true, VarRole::auxiliary);
  QuadratureRule rule = gauss_legendre(m);
  AffineSlot ident = AffineSlot::make_const(CMat::identity(n));

  // hypograph of r_{m,k} at Y = rho: cone triple (I, rho, -U)
  std::vector<AffineSlot> z(k + 1);
  z[0] = sys.slot(rho);
  for (int i = 1; i <= k; ++i)
    z[i] = sys.slot(sys.add_variable("Z" + std::to_string(i), n, true, VarRole::auxiliary));
  for (int i = 0; i < k; ++i) {
    LmiBlock& blk = sys.new_block(2 * n, "geomean" + std::to_string(i));
    sys.place(blk, 0, 0, z[i], 1.0);
    sys.place(blk, 0, 1, z[i + 1], 1.0);
    sys.place(blk, 1, 0, z[i + 1], 1.0);
    sys.place(blk, 1, 1, ident, 1.0);
  }
  std::vector<std::pair<double, AffineSlot>> eq;
  for (int j = 0; j < m; ++j) {
    const int tj = sys.add_variable("T" + std::to_string(j + 1), n, true, VarRole::auxiliary);
    const double node = rule.nodes[j];
    LmiBlock& blk = sys.new_block(2 * n, "persp" + std::to_string(j + 1));
    sys.place(blk, 0, 0, z[k], 1.0);
    sys.place(blk, 0, 0, ident, -1.0);
    sys.place(blk, 0, 0, sys.slot(tj), -1.0);
    sys.place(blk, 0, 1, sys.slot(tj), -std::sqrt(node));
    sys.place(blk, 1, 0, sys.slot(tj), -std::sqrt(node));
    sys.place(blk, 1, 1, ident, 1.0);
    sys.place(blk, 1, 1, sys.slot(tj), -node);
    eq.push_back({rule.weights[j], sys.slot(tj)});
  }
  AffineSlot minus_u = sys.slot(u);
  for (auto& [v, c] : minus_u.terms) c = -c;
  eq.push_back({std::ldexp(1.0, -k), minus_u});
  sys.add_equality("sum_wT=-2^-k(-U)", eq);

  // tau <= Tr(sigma U), kept as an inequality so sigma = 0 stays meaningful
  LmiBlock& pairing = sys.new_block(1, "trace pairing");
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) pairing.add_term(0, 0, u, s, r, sigma(r, s));
  pairing.add_term(0, 0, tau, 0, 0, -1.0);
  sys.validate_structure();
  return sys;
}

double tau_boundary(const LinearMatrixSystem& sys, const Assignment& fixings, double lo, double hi,
                    double bisect_tol, const SolveOptions& opts) {
  const double threshold = std::max(10.0 * opts.tol, 1e-12);
  auto feasible_at = [&](double tau) {
    Assignment fix = fixings;
    fix.insert({"tau", HermitianMatrix::diagonal({tau})});
    CompiledProblem cp = compile(sys, Objective::none(), fix);
    return solve_feasibility(cp.sdp, opts, threshold).feasible;
  };
  // the boundary is bracketed: expand until the endpoints disagree
  bool lo_feas = feasible_at(lo), hi_feas = feasible_at(hi);
  for (int grow = 0; grow < 8 && lo_feas == hi_feas; ++grow) {
    const double width = hi - lo;
    lo -= width;
    hi += width;
    lo_feas = feasible_at(lo);
    hi_feas = feasible_at(hi);
  }
  if (lo_feas == hi_feas) throw NumericalError("tau_boundary: could not bracket the boundary");
  while (hi - lo > bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (feasible_at(mid) == hi_feas)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oprel
