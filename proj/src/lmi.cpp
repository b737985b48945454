#include "oprel/lmi.hpp"

#include <sstream>

namespace oprel {

AffineSlot AffineSlot::make_const(const CMat& c) {
  if (c.rows() != c.cols()) throw ShapeError("AffineSlot: constant must be square");
  AffineSlot s;
  s.dim = c.rows();
  s.constant = c;
  return s;
}

int LinearMatrixSystem::add_variable(const std::string& name, int dim, bool complex_hermitian,
                                     VarRole role) {
  if (dim < 1) throw ShapeError("variable dimension must be >= 1");
  if (variable_index(name) >= 0) throw Error("duplicate variable name: " + name);
  variables.push_back({name, dim, complex_hermitian, role});
  return static_cast<int>(variables.size()) - 1;
}

int LinearMatrixSystem::variable_index(const std::string& name) const {
  for (size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return static_cast<int>(i);
  return -1;
}

AffineSlot LinearMatrixSystem::slot(int var) const {
  if (var < 0 || var >= static_cast<int>(variables.size()))
    throw Error("slot: unknown variable index");
  AffineSlot s;
  s.dim = variables[var].dim;
  s.constant = CMat::zero(s.dim, s.dim);
  s.terms.push_back({var, 1.0});
  return s;
}

LmiBlock& LinearMatrixSystem::new_block(int size, const std::string& label) {
  LmiBlock blk;
  blk.size = size;
  blk.label = label;
  blk.constant = CMat::zero(size, size);
  blocks.push_back(std::move(blk));
  return blocks.back();
}

void LinearMatrixSystem::place(LmiBlock& blk, int cell_r, int cell_c, const AffineSlot& expr,
                               double mult) const {
  const int n = expr.dim;
  const int r0 = cell_r * n, c0 = cell_c * n;
  if (r0 + n > blk.size || c0 + n > blk.size) throw ShapeError("place: cell outside block");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx cv = expr.constant(i, j);
      if (cv != 0.0) blk.add_constant(r0 + i, c0 + j, mult * cv);
    }
  for (const auto& [var, coeff] : expr.terms) {
    if (variables[var].dim != n) throw ShapeError("place: slot term dimension mismatch");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) blk.add_term(r0 + i, c0 + j, var, i, j, mult * coeff);
  }
}

void LinearMatrixSystem::add_equality(const std::string& label,
                                      const std::vector<std::pair<double, AffineSlot>>& parts) {
  if (parts.empty()) throw Error("add_equality: empty");
  MatrixEquality eq;
  eq.label = label;
  eq.dim = parts.front().second.dim;
  eq.constant = CMat::zero(eq.dim, eq.dim);
  for (const auto& [mult, expr] : parts) {
    if (expr.dim != eq.dim) throw ShapeError("add_equality: dimension mismatch");
    eq.constant += expr.constant * cplx(mult, 0.0);
    for (const auto& [var, coeff] : expr.terms) eq.terms.push_back({var, mult * coeff});
  }
  equalities.push_back(std::move(eq));
}

CMat LinearMatrixSystem::eval_block(const LmiBlock& blk, const Assignment& assign) const {
  CMat out = blk.constant;
  for (const BlockTerm& t : blk.terms) {
    auto it = assign.find(variables[t.var].name);
    if (it == assign.end()) throw Error("eval_block: missing assignment for " + variables[t.var].name);
    out(t.row, t.col) += t.coeff * it->second(t.vrow, t.vcol);
  }
  return out;
}

double LinearMatrixSystem::equality_residual(const Assignment& assign) const {
  double worst = 0.0;
  for (const MatrixEquality& eq : equalities) {
    CMat acc = eq.constant;
    for (const auto& [var, coeff] : eq.terms) {
      auto it = assign.find(variables[var].name);
      if (it == assign.end()) throw Error("equality_residual: missing assignment");
      acc += it->second.mat() * cplx(coeff, 0.0);
    }
    worst = std::max(worst, acc.max_abs());
  }
  for (const ScalarEquality& eq : scalar_equalities) {
    double acc = eq.constant;
    for (const auto& [var, w] : eq.pairings) {
      auto it = assign.find(variables[var].name);
      if (it == assign.end()) throw Error("equality_residual: missing assignment");
      acc += re_inner(w, it->second.mat());
    }
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

void LinearMatrixSystem::validate_structure() const {
  for (const LmiBlock& blk : blocks) {
    const double scale = std::max(1.0, blk.constant.max_abs());
    if (!blk.constant.is_hermitian(1e-14 * scale))
      throw Error("block '" + blk.label + "': constant part is not Hermitian");

    // image of each Hermitian basis element of each referenced variable
    std::map<int, std::vector<const BlockTerm*>> by_var;
    for (const BlockTerm& t : blk.terms) by_var[t.var].push_back(&t);
    for (const auto& [var, terms] : by_var) {
      const int n = variables[var].dim;
      auto check_basis = [&](int a, int b, cplx val) {
        // basis matrix E with E[a][b]=val, E[b][a]=conj(val)
        CMat img = CMat::zero(blk.size, blk.size);
        for (const BlockTerm* t : terms) {
          if (t->vrow == a && t->vcol == b) img(t->row, t->col) += t->coeff * val;
          if (a != b && t->vrow == b && t->vcol == a) img(t->row, t->col) += t->coeff * std::conj(val);
        }
        double s = std::max(1.0, img.max_abs());
        if (!img.is_hermitian(1e-12 * s)) {
          std::ostringstream msg;
          msg << "block '" << blk.label << "': non-Hermitian image for variable "
              << variables[var].name << " basis (" << a << "," << b << ")";
          throw Error(msg.str());
        }
      };
      for (int a = 0; a < n; ++a) {
        check_basis(a, a, 1.0);
        for (int b = a + 1; b < n; ++b) {
          check_basis(a, b, 1.0);
          if (variables[var].complex_hermitian) check_basis(a, b, cplx(0.0, 1.0));
        }
      }
    }
  }
}

bool LinearMatrixSystem::assignment_feasible(const Assignment& assign, double tol) const {
  for (const LmiBlock& blk : blocks) {
    HermitianMatrix value(eval_block(blk, assign));
    if (!is_psd(value, tol)) return false;
  }
  double scale = 1.0;
  for (const auto& [name, m] : assign) scale = std::max(scale, m.mat().max_abs());
  return equality_residual(assign) <= tol * scale * 10.0;
}

}  // namespace oprel
