#include "oprel/compile.hpp"

#include <algorithm>
#include <cmath>

namespace oprel {

namespace {

int pair_index(int n, int a, int b) {  // a < b
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

struct Row {
  std::map<int, double> coeff;
  double constant = 0.0;
  double scale = 0.0;
  std::string label;
};

}  // namespace

CompiledProblem compile(const LinearMatrixSystem& sys, const Objective& objective,
                        const Assignment& fixings) {
  CompiledProblem cp;
  cp.variables_ = sys.variables;
  cp.maximize_ = objective.maximize;

  // --- fixings ---
  for (const auto& [name, value] : fixings) {
    const int vi = sys.variable_index(name);
    if (vi < 0) throw Error("compile: fixing references undeclared variable " + name);
    if (value.dim() != sys.variables[vi].dim)
      throw ShapeError("compile: fixing dimension mismatch for " + name);
    cp.fixed_.insert({name, value});
  }
  for (const auto& [name, w] : objective.terms) {
    const int vi = sys.variable_index(name);
    if (vi < 0) throw Error("compile: objective references undeclared variable " + name);
    if (w.rows() != sys.variables[vi].dim || w.cols() != sys.variables[vi].dim)
      throw ShapeError("compile: objective weight dimension mismatch for " + name);
  }

  // --- scalar coordinates of unfixed variables ---
  const int nv = static_cast<int>(sys.variables.size());
  std::vector<bool> is_fixed(nv, false);
  for (int v = 0; v < nv; ++v) is_fixed[v] = cp.fixed_.count(sys.variables[v].name) > 0;

  for (int v = 0; v < nv; ++v) {
    if (is_fixed[v]) continue;
    cp.var_base_[v] = static_cast<int>(cp.coords_.size());
    const int n = sys.variables[v].dim;
    for (int a = 0; a < n; ++a) cp.coords_.push_back({v, a, a, 0});
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        cp.coords_.push_back({v, a, b, 1});
        if (sys.variables[v].complex_hermitian) cp.coords_.push_back({v, a, b, 2});
      }
  }
  const int ncoord = static_cast<int>(cp.coords_.size());

  auto coord_id = [&](int v, int a, int b, int kind) -> int {
    const int n = sys.variables[v].dim;
    const int base = cp.var_base_.at(v);
    if (kind == 0) return base + a;
    const int pi = pair_index(n, a, b);
    if (!sys.variables[v].complex_hermitian) return base + n + pi;
    return base + n + 2 * pi + (kind == 2 ? 1 : 0);
  };

  // Affine decomposition of one variable entry over coordinate ids:
  // list of (coord, complex multiplier) plus a constant for fixed variables.
  auto entry_terms = [&](int v, int vr, int vc, std::vector<std::pair<int, cplx>>& out,
                         cplx& constant) {
    out.clear();
    constant = 0.0;
    if (is_fixed[v]) {
      constant = cp.fixed_.at(sys.variables[v].name)(vr, vc);
      return;
    }
    if (vr == vc) {
      out.push_back({coord_id(v, vr, vr, 0), cplx(1.0, 0.0)});
      return;
    }
    const int a = std::min(vr, vc), b = std::max(vr, vc);
    const double im_sign = (vr < vc) ? 1.0 : -1.0;
    out.push_back({coord_id(v, a, b, 1), cplx(1.0, 0.0)});
    if (sys.variables[v].complex_hermitian)
      out.push_back({coord_id(v, a, b, 2), cplx(0.0, im_sign)});
  };

  // --- equality rows over coordinates ---
  std::vector<Row> rows;
  for (const MatrixEquality& eq : sys.equalities) {
    // Accumulate the constant part (fixed variables fold in here).
    CMat cst = eq.constant;
    double scale = cst.max_abs();
    for (const auto& [v, c] : eq.terms) {
      scale = std::max(scale, std::abs(c));
      if (is_fixed[v]) cst += cp.fixed_.at(sys.variables[v].name).mat() * cplx(c, 0.0);
    }
    scale = std::max(scale, cst.max_abs());
    const int n = eq.dim;
    auto add_row = [&](int a, int b, bool imag_part) {
      Row r;
      r.label = eq.label;
      r.scale = scale;
      r.constant = imag_part ? std::imag(cst(a, b)) : std::real(cst(a, b));
      for (const auto& [v, c] : eq.terms) {
        if (is_fixed[v]) continue;
        if (sys.variables[v].dim != n) throw ShapeError("compile: equality dimension mismatch");
        if (a == b) {
          if (!imag_part) r.coeff[coord_id(v, a, a, 0)] += c;
        } else if (!imag_part) {
          r.coeff[coord_id(v, a, b, 1)] += c;
        } else if (sys.variables[v].complex_hermitian) {
          r.coeff[coord_id(v, a, b, 2)] += c;
        }
      }
      rows.push_back(std::move(r));
    };
    for (int a = 0; a < n; ++a) {
      add_row(a, a, false);
      for (int b = a + 1; b < n; ++b) {
        add_row(a, b, false);
        add_row(a, b, true);
      }
    }
  }
  for (const ScalarEquality& eq : sys.scalar_equalities) {
    Row r;
    r.label = eq.label;
    r.constant = eq.constant;
    r.scale = std::abs(eq.constant);
    for (const auto& [v, w] : eq.pairings) {
      r.scale = std::max(r.scale, w.max_abs());
      if (is_fixed[v]) {
        r.constant += re_inner(w, cp.fixed_.at(sys.variables[v].name).mat());
        continue;
      }
      const int n = sys.variables[v].dim;
      for (int a = 0; a < n; ++a) {
        r.coeff[coord_id(v, a, a, 0)] += std::real(w(a, a));
        for (int b = a + 1; b < n; ++b) {
          r.coeff[coord_id(v, a, b, 1)] += 2.0 * std::real(w(a, b));
          if (sys.variables[v].complex_hermitian)
            r.coeff[coord_id(v, a, b, 2)] += 2.0 * std::imag(w(a, b));
        }
      }
    }
    rows.push_back(std::move(r));
  }

  // --- Gaussian elimination with partial pivoting ---
  struct RawElim {
    double c = 0.0;
    std::vector<std::pair<int, double>> terms;  // over coordinate ids
  };
  std::map<int, RawElim> raw_elim;
  std::vector<int> elim_order;
  std::vector<bool> eliminated(ncoord, false);

  for (Row& row : rows) {
    // substitute already-eliminated coordinates
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = row.coeff.begin(); it != row.coeff.end();) {
        if (!eliminated[it->first]) {
          ++it;
          continue;
        }
        const double c = it->second;
        const RawElim& ex = raw_elim.at(it->first);
        it = row.coeff.erase(it);
        row.constant += c * ex.c;
        for (const auto& [g, w] : ex.terms) row.coeff[g] += c * w;
        changed = true;
      }
    }
    // pick the pivot
    int pivot = -1;
    double best = 0.0;
    for (const auto& [g, c] : row.coeff)
      if (std::abs(c) > best) {
        best = std::abs(c);
        pivot = g;
      }
    const double floor = 1e-12 * std::max(1.0, row.scale);
    if (pivot < 0 || best <= floor) {
      if (std::abs(row.constant) > 1e-8 * std::max(1.0, row.scale))
        throw Error("compile: inconsistent fixings violate equality '" + row.label + "'");
      continue;  // redundant row
    }
    RawElim ex;
    const double pc = row.coeff.at(pivot);
    ex.c = -row.constant / pc;
    for (const auto& [g, c] : row.coeff)
      if (g != pivot) ex.terms.push_back({g, -c / pc});
    raw_elim[pivot] = std::move(ex);
    eliminated[pivot] = true;
    elim_order.push_back(pivot);
  }

  // resolve chains so eliminated coordinates reference only free ones
  for (auto it = elim_order.rbegin(); it != elim_order.rend(); ++it) {
    RawElim& ex = raw_elim.at(*it);
    std::vector<std::pair<int, double>> resolved;
    double c = ex.c;
    for (const auto& [g, w] : ex.terms) {
      if (!eliminated[g]) {
        resolved.push_back({g, w});
        continue;
      }
      const RawElim& sub = raw_elim.at(g);
      c += w * sub.c;
      for (const auto& [g2, w2] : sub.terms) resolved.push_back({g2, w * w2});
    }
    std::sort(resolved.begin(), resolved.end());
    std::vector<std::pair<int, double>> merged;
    for (const auto& [g, w] : resolved) {
      if (!merged.empty() && merged.back().first == g)
        merged.back().second += w;
      else
        merged.push_back({g, w});
    }
    ex.c = c;
    ex.terms = std::move(merged);
  }

  // --- final y indices ---
  cp.coord_to_y_.assign(ncoord, -1);
  int p = 0;
  for (int g = 0; g < ncoord; ++g)
    if (!eliminated[g]) cp.coord_to_y_[g] = p++;
  for (int g : elim_order) {
    const RawElim& ex = raw_elim.at(g);
    CompiledProblem::AffineReal ar;
    ar.c = ex.c;
    for (const auto& [g2, w] : ex.terms) {
      if (cp.coord_to_y_[g2] < 0) throw Error("compile: internal elimination cycle");
      ar.terms.push_back({cp.coord_to_y_[g2], w});
    }
    cp.elim_[g] = std::move(ar);
  }

  cp.sdp.num_vars = p;
  cp.sdp.cost.assign(p, 0.0);

  // Affine form of one coordinate over y.
  auto coord_affine = [&](int g, std::vector<std::pair<int, double>>& terms) -> double {
    terms.clear();
    if (cp.coord_to_y_[g] >= 0) {
      terms.push_back({cp.coord_to_y_[g], 1.0});
      return 0.0;
    }
    const CompiledProblem::AffineReal& ar = cp.elim_.at(g);
    terms = ar.terms;
    return ar.c;
  };

  // --- blocks ---
  std::vector<std::pair<int, double>> diag_f0;  // merged 1x1 entries
  std::vector<std::vector<std::pair<int, double>>> diag_fi;  // per y
  int diag_count = 0;
  diag_fi.resize(p);

  std::vector<std::pair<int, cplx>> ent;
  std::vector<std::pair<int, double>> aff;
  for (const LmiBlock& blk : sys.blocks) {
    const int s = blk.size;
    CMat g0 = blk.constant;
    std::map<int, CMat> gf;  // y index -> coefficient matrix
    for (const BlockTerm& t : blk.terms) {
      cplx cst;
      entry_terms(t.var, t.vrow, t.vcol, ent, cst);
      if (cst != 0.0) g0(t.row, t.col) += t.coeff * cst;
      for (const auto& [g, mult] : ent) {
        const cplx c = t.coeff * mult;
        const double base = coord_affine(g, aff);
        if (base != 0.0) g0(t.row, t.col) += c * base;
        for (const auto& [yi, w] : aff) {
          auto it = gf.find(yi);
          if (it == gf.end()) it = gf.emplace(yi, CMat::zero(s, s)).first;
          it->second(t.row, t.col) += c * w;
        }
      }
    }

    const double scale = std::max(1.0, g0.max_abs());
    if (!g0.is_hermitian(1e-11 * scale))
      throw Error("compile: block '" + blk.label + "' is not Hermitian after substitution");
    bool complex_block = false;
    for (int i = 0; i < s && !complex_block; ++i)
      for (int j = 0; j < s; ++j)
        if (std::imag(g0(i, j)) != 0.0) {
          complex_block = true;
          break;
        }
    for (const auto& [yi, m] : gf) {
      if (!m.is_hermitian(1e-11 * std::max(1.0, m.max_abs())))
        throw Error("compile: block '" + blk.label + "' has a non-Hermitian coefficient");
      if (!complex_block)
        for (int i = 0; i < s && !complex_block; ++i)
          for (int j = 0; j < s; ++j)
            if (std::imag(m(i, j)) != 0.0) {
              complex_block = true;
              break;
            }
    }

    // 1x1 blocks route into the shared diagonal block
    if (s == 1 && !complex_block) {
      diag_f0.push_back({diag_count, -std::real(g0(0, 0))});
      for (const auto& [yi, m] : gf) diag_fi[yi].push_back({diag_count, std::real(m(0, 0))});
      ++diag_count;
      continue;
    }

    const int es = complex_block ? 2 * s : s;
    cp.sdp.blocks.push_back({es, false});
    cp.sdp.F.push_back(std::vector<SparseSym>(p + 1));
    std::vector<SparseSym>& fb = cp.sdp.F.back();
    auto emit = [&](const CMat& m, double sign, SparseSym& out) {
      // upper triangle of the (possibly embedded) real symmetric image
      for (int i = 0; i < s; ++i)
        for (int j = i; j < s; ++j) {
          const double re = sign * std::real(m(i, j));
          const double im = sign * std::imag(m(i, j));
          if (re != 0.0) {
            out.push_back({i, j, re});
            if (complex_block) out.push_back({s + i, s + j, re});
          }
          if (complex_block && im != 0.0) {
            // embedding [[Re, -Im],[Im, Re]]: upper-triangle entries (i, s+j)
            out.push_back({i, s + j, -im});
            if (i != j) out.push_back({j, s + i, im});
          }
        }
    };
    emit(g0, -1.0, fb[0]);  // F_0 = -constant part
    for (const auto& [yi, m] : gf) emit(m, 1.0, fb[yi + 1]);
  }

  if (diag_count > 0) {
    cp.sdp.blocks.push_back({diag_count, true});
    cp.sdp.F.push_back(std::vector<SparseSym>(p + 1));
    std::vector<SparseSym>& fb = cp.sdp.F.back();
    for (const auto& [d, v] : diag_f0)
      if (v != 0.0) fb[0].push_back({d, d, v});
    for (int yi = 0; yi < p; ++yi)
      for (const auto& [d, v] : diag_fi[yi])
        if (v != 0.0) fb[yi + 1].push_back({d, d, v});
  }

  // --- objective ---
  double offset = 0.0;
  std::vector<double> b(p, 0.0);
  for (const auto& [name, w] : objective.terms) {
    const int v = sys.variable_index(name);
    if (is_fixed[v]) {
      offset += re_inner(w, cp.fixed_.at(name).mat());
      continue;
    }
    const int n = sys.variables[v].dim;
    auto add_coord = [&](int g, double weight) {
      if (weight == 0.0) return;
      const double base = coord_affine(g, aff);
      offset += weight * base;
      for (const auto& [yi, ww] : aff) b[yi] += weight * ww;
    };
    for (int a = 0; a < n; ++a) {
      add_coord(coord_id(v, a, a, 0), std::real(w(a, a)));
      for (int bb = a + 1; bb < n; ++bb) {
        add_coord(coord_id(v, a, bb, 1), 2.0 * std::real(w(a, bb)));
        if (sys.variables[v].complex_hermitian)
          add_coord(coord_id(v, a, bb, 2), 2.0 * std::imag(w(a, bb)));
      }
    }
  }
  cp.offset_ = offset;
  for (int i = 0; i < p; ++i) cp.sdp.cost[i] = objective.maximize ? -b[i] : b[i];

  cp.sdp.validate();
  return cp;
}

HermitianMatrix CompiledProblem::extract(const std::string& var, const SdpSolution& sol) const {
  auto fit = fixed_.find(var);
  if (fit != fixed_.end()) return fit->second;
  int vi = -1;
  for (size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == var) vi = static_cast<int>(i);
  if (vi < 0) throw Error("extract: unknown variable " + var);
  const int n = variables_[vi].dim;
  const int base = var_base_.at(vi);

  auto coord_value = [&](int g) -> double {
    if (coord_to_y_[g] >= 0) return sol.y[coord_to_y_[g]];
    const AffineReal& ar = elim_.at(g);
    double v = ar.c;
    for (const auto& [yi, w] : ar.terms) v += w * sol.y[yi];
    return v;
  };

  CMat m(n, n);
  int g = base;
  for (int a = 0; a < n; ++a) m(a, a) = coord_value(g++);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double re = coord_value(g++);
      const double im = variables_[vi].complex_hermitian ? coord_value(g++) : 0.0;
      m(a, b) = cplx(re, im);
      m(b, a) = cplx(re, -im);
    }
  return HermitianMatrix(m);
}

}  // namespace oprel
