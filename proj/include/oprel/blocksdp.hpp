#pragma once

#include <string>
#include <vector>

#include "oprel/errors.hpp"

namespace oprel {

// Sparse symmetric matrix: upper-triangle entries (row <= col).
struct SparseEntry {
  int row = 0, col = 0;
  double value = 0.0;
};

using SparseSym = std::vector<SparseEntry>;

struct BlockSpec {
  int size = 0;
  bool diagonal = false;
};

// Standard LMI-form block SDP:
//   minimize  cost . y   subject to   sum_i y_i F_i - F_0 >= 0 per block,
// with F[b][0] = F_0 and F[b][i] the matrix of variable i in block b.
struct BlockSdp {
  int num_vars = 0;
  std::vector<double> cost;
  std::vector<BlockSpec> blocks;
  std::vector<std::vector<SparseSym>> F;  // [block][0..num_vars]

  int total_dim() const {
    int d = 0;
    for (const BlockSpec& b : blocks) d += b.size;
    return d;
  }
  void validate() const;
};

enum class SdpStatus { optimal, infeasible_certificate, max_iterations };

struct IterStat {
  double mu = 0.0;
  double primal_inf = 0.0;
  double dual_inf = 0.0;
  double gap = 0.0;  // <X, S>
};

struct SdpSolution {
  SdpStatus status = SdpStatus::max_iterations;
  std::vector<double> y;
  double objective = 0.0;  // cost . y at the returned point
  std::vector<std::vector<double>> dual_blocks;  // dense row-major X per block
  double primal_inf = 0.0;
  double dual_inf = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  std::vector<IterStat> trace;
};

struct SolveOptions {
  double tol = 1e-8;
  double gap_tol = 1e-7;
  int max_iterations = 200;
  int max_total_dim = 400;
  double step_fraction = 0.98;
  bool verbose = false;
};

SdpSolution solve(const BlockSdp& problem, const SolveOptions& opts = {});

struct FeasibilityResult {
  bool feasible = false;
  double margin = 0.0;  // optimal s of the phase-1 problem (negative inside)
  SdpSolution solution;
};

// Phase-1: minimize s subject to blocks + s I >= 0 and s >= -1. The system
// is feasible exactly when the optimal s is nonpositive; the decision
// threshold leaves a band around zero for solver tolerance.
FeasibilityResult solve_feasibility(const BlockSdp& problem, const SolveOptions& opts = {},
                                    double threshold = 1e-7);

// SDPA sparse format (".dat-s"): mDIM / nBLOCK / block structure (negative
// entries mark diagonal blocks) / cost vector / "matno blkno i j value" lines
// with 1-based indices, i <= j, and matno 0 denoting F_0.
std::string export_sdpa(const BlockSdp& problem);
void export_sdpa_file(const BlockSdp& problem, const std::string& path);
BlockSdp import_sdpa(const std::string& text);
BlockSdp import_sdpa_file(const std::string& path);

}  // namespace oprel
