#include "oprel/cone_factory.hpp"

#include <cmath>

namespace oprel {

namespace {

// [[A, B],[B, C]] pattern used by both the f_t perspective and geometric mean
// blocks; all slots share dimension n, the block is 2n x 2n.
void place_two_by_two(LinearMatrixSystem& sys, LmiBlock& blk, const AffineSlot& a,
                      const AffineSlot& b, const AffineSlot& c) {
  sys.place(blk, 0, 0, a, 1.0);
  sys.place(blk, 0, 1, b, 1.0);
  sys.place(blk, 1, 0, b, 1.0);
  sys.place(blk, 1, 1, c, 1.0);
}

AffineSlot combine(const AffineSlot& a, double ca, const AffineSlot& b, double cb) {
  AffineSlot out;
  out.dim = a.dim;
  out.constant = a.constant * cplx(ca, 0.0) + b.constant * cplx(cb, 0.0);
  out.terms = a.terms;
  for (auto& [v, c] : out.terms) c *= ca;
  for (const auto& [v, c] : b.terms) out.terms.push_back({v, cb * c});
  return out;
}

AffineSlot scaled(const AffineSlot& a, double c) {
  AffineSlot out = a;
  out.constant *= cplx(c, 0.0);
  for (auto& [v, coeff] : out.terms) coeff *= c;
  return out;
}

}  // namespace

LinearMatrixSystem hypograph_ft(double t, int n) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("hypograph_ft: t must lie in [0,1]");
  LinearMatrixSystem sys;
  const int x = sys.add_variable("X", n, false, VarRole::input);
  const int tv = sys.add_variable("T", n, false, VarRole::input);
  LmiBlock& blk = sys.new_block(2 * n, "hypograph_ft");
  AffineSlot ident = AffineSlot::make_const(CMat::identity(n));
  // X - I - T | -sqrt(t) T ; -sqrt(t) T | I - tT
  AffineSlot upper = combine(combine(sys.slot(x), 1.0, ident, -1.0), 1.0, sys.slot(tv), -1.0);
  sys.place(blk, 0, 0, upper, 1.0);
  sys.place(blk, 0, 1, sys.slot(tv), -std::sqrt(t));
  sys.place(blk, 1, 0, sys.slot(tv), -std::sqrt(t));
  sys.place(blk, 1, 1, combine(ident, 1.0, sys.slot(tv), -t), 1.0);
  sys.validate_structure();
  return sys;
}

LinearMatrixSystem perspective_ft(double t, int n) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("perspective_ft: t must lie in [0,1]");
  LinearMatrixSystem sys;
  const int x = sys.add_variable("X", n, false, VarRole::input);
  const int y = sys.add_variable("Y", n, false, VarRole::input);
  const int tv = sys.add_variable("T", n, false, VarRole::input);
  LmiBlock& blk = sys.new_block(2 * n, "perspective_ft");
  AffineSlot upper = combine(combine(sys.slot(x), 1.0, sys.slot(y), -1.0), 1.0, sys.slot(tv), -1.0);
  sys.place(blk, 0, 0, upper, 1.0);
  sys.place(blk, 0, 1, sys.slot(tv), -std::sqrt(t));
  sys.place(blk, 1, 0, sys.slot(tv), -std::sqrt(t));
  sys.place(blk, 1, 1, combine(sys.slot(y), 1.0, sys.slot(tv), -t), 1.0);
  sys.validate_structure();
  return sys;
}

LinearMatrixSystem perspective_ft_plus(double t, int n) {
  if (!(t > 0.0 && t < 1.0))
    throw DomainError("perspective_ft_plus: t at an endpoint is degenerate");
  LinearMatrixSystem sys;
  const int x = sys.add_variable("X", n, false, VarRole::input);
  const int y = sys.add_variable("Y", n, false, VarRole::input);
  const int tv = sys.add_variable("T", n, false, VarRole::input);
  LmiBlock& blk = sys.new_block(2 * n, "perspective_ft_plus");
  place_two_by_two(sys, blk, combine(scaled(sys.slot(y), 1.0 / t), 1.0, sys.slot(tv), -1.0),
                   scaled(sys.slot(tv), -1.0),
                   combine(scaled(sys.slot(x), 1.0 / (1.0 - t)), 1.0, sys.slot(tv), -1.0));
  sys.validate_structure();
  return sys;
}

LinearMatrixSystem geomean_chain(int k, int n) {
  if (k < 1) throw DomainError("geomean_chain: k must be >= 1");
  LinearMatrixSystem sys;
  const int x = sys.add_variable("X", n, false, VarRole::input);
  const int y = sys.add_variable("Y", n, false, VarRole::input);
  const int v = sys.add_variable("V", n, false, VarRole::input);
  std::vector<int> z(k + 1);
  for (int i = 0; i <= k; ++i)
    z[i] = sys.add_variable("Z" + std::to_string(i), n, false, VarRole::auxiliary);
  sys.add_equality("Z0=Y", {{1.0, sys.slot(z[0])}, {-1.0, sys.slot(y)}});
  sys.add_equality("Zk=V", {{1.0, sys.slot(z[k])}, {-1.0, sys.slot(v)}});
  for (int i = 0; i < k; ++i) {
    LmiBlock& blk = sys.new_block(2 * n, "geomean" + std::to_string(i));
    place_two_by_two(sys, blk, sys.slot(z[i]), sys.slot(z[i + 1]), sys.slot(x));
  }
  sys.validate_structure();
  return sys;
}

ConeHandles append_op_rel_entr(LinearMatrixSystem& sys, const AffineSlot& x, const AffineSlot& y,
                               const AffineSlot& t, int m, int k, const std::string& prefix,
                               bool complex_aux) {
  if (m < 1 || k < 0) throw DomainError("append_op_rel_entr: need m >= 1, k >= 0");
  const int n = x.dim;
  ConeHandles h;
  h.rule = gauss_legendre(m);

  h.z_vars.resize(k + 1);
  for (int i = 0; i <= k; ++i)
    h.z_vars[i] =
        sys.add_variable(prefix + "Z" + std::to_string(i), n, complex_aux, VarRole::auxiliary);
  sys.add_equality(prefix + "Z0=Y", {{1.0, sys.slot(h.z_vars[0])}, {-1.0, y}});

  for (int i = 0; i < k; ++i) {
    LmiBlock& blk = sys.new_block(2 * n, prefix + "geomean" + std::to_string(i));
    place_two_by_two(sys, blk, sys.slot(h.z_vars[i]), sys.slot(h.z_vars[i + 1]), x);
  }

  h.t_vars.resize(m);
  std::vector<std::pair<double, AffineSlot>> eq;
  for (int j = 0; j < m; ++j) {
    h.t_vars[j] =
        sys.add_variable(prefix + "T" + std::to_string(j + 1), n, complex_aux, VarRole::auxiliary);
    const double tj = h.rule.nodes[j];
    LmiBlock& blk = sys.new_block(2 * n, prefix + "persp" + std::to_string(j + 1));
    // [ Z_k - X - T_j , -sqrt(t_j) T_j ; -sqrt(t_j) T_j , X - t_j T_j ]
    AffineSlot tjslot = sys.slot(h.t_vars[j]);
    sys.place(blk, 0, 0, combine(combine(sys.slot(h.z_vars[k]), 1.0, x, -1.0), 1.0, tjslot, -1.0),
              1.0);
    sys.place(blk, 0, 1, tjslot, -std::sqrt(tj));
    sys.place(blk, 1, 0, tjslot, -std::sqrt(tj));
    sys.place(blk, 1, 1, combine(x, 1.0, tjslot, -tj), 1.0);
    eq.push_back({h.rule.weights[j], sys.slot(h.t_vars[j])});
  }
  eq.push_back({std::ldexp(1.0, -k), t});
  sys.add_equality(prefix + "sum_wT=-2^-k T", eq);
  return h;
}

LinearMatrixSystem op_rel_entr_epi_cone(int n, int m, int k, bool complex_vars) {
  if (n < 1) throw DomainError("op_rel_entr_epi_cone: n must be >= 1");
  LinearMatrixSystem sys;
  const int x = sys.add_variable("X", n, complex_vars, VarRole::input);
  const int y = sys.add_variable("Y", n, complex_vars, VarRole::input);
  const int t = sys.add_variable("T", n, complex_vars, VarRole::input);
  append_op_rel_entr(sys, sys.slot(x), sys.slot(y), sys.slot(t), m, k, "", complex_vars);
  sys.validate_structure();
  return sys;
}

LinearMatrixSystem matrix_hypograph_rmk(int n, int m, int k, bool complex_vars) {
  if (n < 1) throw DomainError("matrix_hypograph_rmk: n must be >= 1");
  LinearMatrixSystem sys;
  const int y = sys.add_variable("Y", n, complex_vars, VarRole::input);
  const int u = sys.add_variable("U", n, complex_vars, VarRole::input);
  AffineSlot ident = AffineSlot::make_const(CMat::identity(n));
  AffineSlot minus_u = sys.slot(u);
  for (auto& [v, c] : minus_u.terms) c = -c;
  append_op_rel_entr(sys, ident, sys.slot(y), minus_u, m, k, "", complex_vars);
  sys.validate_structure();
  return sys;
}

double rmk_scalar(int m, int k, double x) { return eval_rmk(log_approximant(m, k), x); }

HermitianMatrix perspective_rmk(int m, int k, const HermitianMatrix& y, const HermitianMatrix& x) {
  return nc_perspective([m, k](double v) { return rmk_scalar(m, k, v); }, y, x);
}

MembershipCertificate build_certificate(const HermitianMatrix& x, const HermitianMatrix& y, int m,
                                        int k) {
  if (!is_positive_definite(x) || !is_positive_definite(y))
    throw DomainError("build_certificate: inputs must be positive definite");
  MembershipCertificate cert;
  QuadratureRule rule = gauss_legendre(m);
  HermitianMatrix z = y;
  cert.aux.insert({"Z0", z});
  for (int i = 1; i <= k; ++i) {
    z = geometric_mean(x, z, 0.5);
    cert.aux.insert({"Z" + std::to_string(i), z});
  }
  for (int j = 0; j < m; ++j) {
    const double tj = rule.nodes[j];
    HermitianMatrix tm = nc_perspective([tj](double v) { return f_t(tj, v); }, z, x);
    cert.aux.insert({"T" + std::to_string(j + 1), tm});
  }
  return cert;
}

bool check_membership(const HermitianMatrix& x, const HermitianMatrix& y, const HermitianMatrix& t,
                      int m, int k, MembershipMethod method) {
  if (x.dim() != y.dim() || x.dim() != t.dim()) throw ShapeError("check_membership: dimensions");
  if (!is_positive_definite(x) || !is_positive_definite(y))
    throw DomainError("check_membership: X, Y must be positive definite");
  const double tol = 1e-9;

  if (method == MembershipMethod::oracle) {
    HermitianMatrix bound = perspective_rmk(m, k, y, x);  // T >= -P
    return is_psd(t + bound, tol);
  }

  // Certificate route: build the canonical auxiliaries for the boundary point
  // T* = -P_{r_{m,k}}(Y,X), then absorb T - T* into the T_j (the weights sum
  // to one, so shifting each T_j by -2^{-k} (T - T*) restores the equality;
  // the perspective blocks change by a PSD multiple of [[1,s],[s,s^2]] (x) D).
  MembershipCertificate cert = build_certificate(x, y, m, k);
  QuadratureRule rule = gauss_legendre(m);
  HermitianMatrix tstar(t.dim());
  {
    CMat acc = CMat::zero(t.dim(), t.dim());
    for (int j = 0; j < m; ++j)
      acc += cert.aux.at("T" + std::to_string(j + 1)).mat() * cplx(rule.weights[j], 0.0);
    tstar = HermitianMatrix(acc * cplx(-std::ldexp(1.0, k), 0.0));
  }
  HermitianMatrix delta = t - tstar;
  const double shift = -std::ldexp(1.0, -k);

  LinearMatrixSystem sys = op_rel_entr_epi_cone(t.dim(), m, k, true);
  Assignment assign;
  assign.insert({"X", x});
  assign.insert({"Y", y});
  assign.insert({"T", t});
  for (int i = 0; i <= k; ++i) {
    const std::string name = "Z" + std::to_string(i);
    assign.insert({name, cert.aux.at(name)});
  }
  for (int j = 0; j < m; ++j) {
    const std::string name = "T" + std::to_string(j + 1);
    assign.insert({name, cert.aux.at(name) + shift * delta});
  }
  return sys.assignment_feasible(assign, tol);
}

}  // namespace oprel
