#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oprel/compile.hpp"
#include "oprel/quantum.hpp"

namespace oprel {

struct ExperimentReport {
  std::string subcommand;
  int m = 0, k = 0, n = 0, l = 0;
  uint64_t seed = 0;
  double objective_sdp = 0.0;
  double objective_oracle = 0.0;
  double gap = 0.0;  // |objective_sdp - objective_oracle|
  double wall_time_s = 0.0;
  bool solver_ok = false;
  std::string note;

  std::string to_json() const;
};

// Entropy maximization over Ax = b, x >= 0, modeled with n scalar cone
// triples (x_i, 1, t_i). The oracle is Newton's method on the smooth dual.
struct MaxentInstance {
  int n = 0, l = 0;
  std::vector<double> a;  // l x n row-major
  std::vector<double> b;
};
MaxentInstance make_maxent_instance(int n, int l, uint64_t seed);

struct ScalarSolveResult {
  double value = 0.0;
  bool ok = false;
  std::string note;
};
ScalarSolveResult solve_maxent_sdp(const MaxentInstance& inst, int m, int k,
                                   const SolveOptions& opts = {});
ScalarSolveResult maxent_dual_oracle(const MaxentInstance& inst);

ExperimentReport run_maxent(int n, int l, uint64_t seed, int m, int k,
                            const SolveOptions& opts = {});

// A posynomial program in explicit form.
struct Posynomial {
  std::vector<double> coeff;                  // positive
  std::vector<std::vector<double>> exponent;  // one vector per term
};
struct GpInstance {
  int n = 0;
  Posynomial objective;
  std::vector<Posynomial> constraints;  // each posynomial <= 1
};

GpInstance make_gp_instance(int n, int l, int terms, double sparsity, uint64_t seed);

struct GpSolveResult {
  double value = 0.0;
  bool ok = false;
  std::string note;
};
// Conic route: y = log x, one cone triple per monomial.
GpSolveResult solve_gp_sdp(const GpInstance& inst, int m, int k, const SolveOptions& opts = {});
// Independent oracle: damped Newton on the log-sum-exp reformulation (barrier
// path when constraints are present).
GpSolveResult solve_gp_oracle(const GpInstance& inst);

ExperimentReport run_gp(int n, int l, int terms, double sparsity, uint64_t seed, int m, int k,
                        const SolveOptions& opts = {});

// max Tr X - D(X||Y); the optimum equals Tr Y.
ScalarSolveResult solve_tracevar_sdp(const HermitianMatrix& y, int m, int k,
                                     const SolveOptions& opts = {});
// seeded unit-trace Y
ExperimentReport run_tracevar(int n, uint64_t seed, int m, int k, const SolveOptions& opts = {});

struct ApproxErrorRow {
  double x = 0.0;
  int m = 0, k = 0;
  double error = 0.0;
  double bound = 0.0;
};
std::vector<ApproxErrorRow> approx_error_table(const std::vector<int>& ms,
                                               const std::vector<int>& ks,
                                               const std::vector<double>& grid, int jobs = 1);
std::string approx_error_csv(const std::vector<ApproxErrorRow>& rows);
std::string approx_error_json(const std::vector<ApproxErrorRow>& rows);

std::vector<double> log_spaced_grid(double lo, double hi, int points);

}  // namespace oprel
