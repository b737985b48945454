#pragma once

#include "oprel/blocksdp.hpp"
#include "oprel/lmi.hpp"

namespace oprel {

// Linear objective sum_v Re<W_v, v> over declared variables.
struct Objective {
  bool maximize = false;
  std::vector<std::pair<std::string, CMat>> terms;

  static Objective none() { return {}; }
  static Objective trace_of(const std::string& var, int dim, bool maximize_flag) {
    Objective o;
    o.maximize = maximize_flag;
    o.terms.push_back({var, CMat::identity(dim)});
    return o;
  }
};

// Scalarization of a system under a partial assignment of its variables.
// Hermitian matrix variables contribute n(n+1)/2 (real) or n^2 (complex)
// scalars; equalities are eliminated by substitution (Gaussian elimination
// with partial pivoting); complex blocks are embedded as [[A,-B],[B,A]];
// all 1x1 blocks are merged into one diagonal block.
class CompiledProblem {
 public:
  BlockSdp sdp;

  double original_objective(const SdpSolution& sol) const {
    return (maximize_ ? -sol.objective : sol.objective) + offset_;
  }
  bool maximize() const { return maximize_; }

  // Reconstruct a variable's value from a solution.
  HermitianMatrix extract(const std::string& var, const SdpSolution& sol) const;

 private:
  friend CompiledProblem compile(const LinearMatrixSystem&, const Objective&, const Assignment&);

  struct Coord {
    int var = 0;
    int a = 0, b = 0;
    int kind = 0;  // 0 diag, 1 real part, 2 imaginary part
  };
  struct AffineReal {
    double c = 0.0;
    std::vector<std::pair<int, double>> terms;  // over free y indices
  };

  std::vector<MatrixVariable> variables_;
  Assignment fixed_;
  std::vector<Coord> coords_;       // all scalar coordinates of unfixed variables
  std::vector<int> coord_to_y_;     // -1 when eliminated
  std::map<int, AffineReal> elim_;  // eliminated coordinate -> affine over y
  std::map<int, int> var_base_;     // variable index -> first coordinate id
  bool maximize_ = false;
  double offset_ = 0.0;
};

CompiledProblem compile(const LinearMatrixSystem& sys, const Objective& objective,
                        const Assignment& fixings);

}  // namespace oprel
