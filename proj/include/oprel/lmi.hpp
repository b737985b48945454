#pragma once

#include <map>
#include <string>
#include <vector>

#include "oprel/hermitian.hpp"

namespace oprel {

enum class VarRole { input, auxiliary };

struct MatrixVariable {
  std::string name;
  int dim = 1;
  bool complex_hermitian = false;  // real symmetric when false
  VarRole role = VarRole::input;
};

// One scalar coefficient applied to one entry of one variable, placed at one
// entry of a block. Blocks are affine in the declared variables; this encoding
// covers every placement pattern used here (cell placements, Kronecker lifts,
// vector pairings).
struct BlockTerm {
  int row = 0, col = 0;  // entry of the block
  int var = 0;           // variable index
  int vrow = 0, vcol = 0;  // entry of the variable
  cplx coeff;
};

struct LmiBlock {
  int size = 0;
  std::string label;
  CMat constant;
  std::vector<BlockTerm> terms;

  void add_term(int row, int col, int var, int vrow, int vcol, cplx coeff) {
    if (coeff == 0.0) return;
    terms.push_back({row, col, var, vrow, vcol, coeff});
  }
  void add_constant(int row, int col, cplx value) { constant(row, col) += value; }
};

// Affine matrix expression c + sum coeff_v * v over declared variables, used
// to pass inputs into the cone builders (a plain variable, a constant, or a
// scalar combination such as z/c or -a'y).
struct AffineSlot {
  int dim = 0;
  CMat constant;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)

  static AffineSlot make_const(const CMat& c);
  static AffineSlot make_const(const HermitianMatrix& c) { return make_const(c.mat()); }
};

// sum_v coeff_v * v + C = 0 (entrywise, all matrices of equal dimension)
struct MatrixEquality {
  int dim = 0;
  std::string label;
  std::vector<std::pair<int, double>> terms;
  CMat constant;
};

// sum_v Re<W_v, v> + c = 0
struct ScalarEquality {
  std::string label;
  std::vector<std::pair<int, CMat>> pairings;
  double constant = 0.0;
};

using Assignment = std::map<std::string, HermitianMatrix>;

struct LinearMatrixSystem {
  std::vector<MatrixVariable> variables;
  std::vector<LmiBlock> blocks;
  std::vector<MatrixEquality> equalities;
  std::vector<ScalarEquality> scalar_equalities;

  int add_variable(const std::string& name, int dim, bool complex_hermitian, VarRole role);
  int variable_index(const std::string& name) const;  // -1 when absent

  AffineSlot slot(int var) const;
  AffineSlot slot(const std::string& name) const { return slot(variable_index(name)); }

  LmiBlock& new_block(int size, const std::string& label);

  // Place mult * expr into the n x n cell (cell_r, cell_c) of a block.
  void place(LmiBlock& blk, int cell_r, int cell_c, const AffineSlot& expr, double mult) const;

  // Whole-matrix equality sum_i mult_i * expr_i + shift = 0.
  void add_equality(const std::string& label,
                    const std::vector<std::pair<double, AffineSlot>>& parts);

  CMat eval_block(const LmiBlock& blk, const Assignment& assign) const;
  double equality_residual(const Assignment& assign) const;

  // Every block must evaluate to a Hermitian matrix for every Hermitian
  // assignment of the variables; verified on the coefficient patterns by
  // pushing each Hermitian basis element of each variable through the block
  // maps. Throws on violation.
  void validate_structure() const;

  // All blocks PSD (relative tolerance per block) and equality residuals
  // small, for a full assignment of inputs and auxiliaries.
  bool assignment_feasible(const Assignment& assign, double tol) const;
};

// Certificate: values for the auxiliary variables of a system.
struct MembershipCertificate {
  Assignment aux;
};

}  // namespace oprel
