#pragma once

#include <functional>
#include <optional>

#include "oprel/cone_factory.hpp"

namespace oprel {

double agm(double x, double y);
double log_mean(double x, double y);

// A mean iteration Phi = (P_{h1}, P_{h2}) leaving a target perspective P_g
// invariant, with contraction constants and the quadrature measure of the
// target's positive integral representation.
struct MeanIteration {
  std::string name;
  std::function<double(double)> h1, h2;
  double h1_at1 = 1.0, h2_at1 = 1.0;
  double dh1_at1 = 0.0, dh2_at1 = 0.0;
  double c = 2.0;                // |log(P1/P2)| <= (1/c)|log(x/y)|
  std::optional<double> c0;     // quadratic constant when available
  double g0 = 0.0, g1 = 1.0;    // anchors of the target
  std::function<double(double, double)> target;          // P_g(x, y)
  std::function<QuadratureRule(int)> measure;            // m-point rule of mu
  // Adds one recursion layer over (u1, u2): emits the LMI pieces of h1, h2
  // and returns the next pair of slots. `psd_size` accumulates the emitted
  // PSD block sizes (s1 + s2 of the layer).
  std::function<std::pair<AffineSlot, AffineSlot>(LinearMatrixSystem&, const AffineSlot&,
                                                  const AffineSlot&, const std::string&,
                                                  int&)>
      emit_layer;
  int layer_psd_size = 0;  // s1 + s2

  double p_h1(double x, double y) const { return y * h1(x / y); }
  double p_h2(double x, double y) const { return y * h2(x / y); }
  double b_constant() const {
    const double d = dh1_at1 + dh2_at1;
    return std::max(d, h1_at1 + h2_at1 - d);
  }
};

// Factories validate the functional equation P_g(Phi(x,y)) = P_g(x,y) on a
// seeded random grid (relative tolerance 1e-10).
MeanIteration log_mean_iteration();
MeanIteration agm_iteration();

// P_{r_{m,k}}(x, y) = P_{r_m^+}(Phi^(k)(x, y)).
double eval_rmk_phi(const MeanIteration& iter, int m, int k, double x, double y);

// |log(P_{h1}/P_{h2})| / |log(x/y)| and the same with the square in the
// denominator; undefined at x = y.
double contraction_ratio(const MeanIteration& iter, double x, double y);
double quadratic_ratio(const MeanIteration& iter, double x, double y);

struct FunceqParams {
  int m = 1;
  int k = 0;
};

// Parameter choice giving |r_{m,k}(x) - g(x)| <= eps on [1/a, a]; uses the
// doubly-logarithmic branch when the iteration has a quadratic constant.
FunceqParams choose_params_funceq(const MeanIteration& iter, double a, double eps);

// Recursive cone: variables (x, y, tau), feasible iff the k-layer
// approximation of P_g(x, y) is at least tau. Total PSD block size is
// 2m + k (s1 + s2).
LinearMatrixSystem funceq_cone(const MeanIteration& iter, int m, int k);

// Moments mu_0..mu_{count-1} of the AGM target measure, recovered from the
// series of AGM(1+u, 1) at u = 0.
std::vector<double> agm_mu_moments(int count);

// Matrix extension for the logarithmic mean (the AGM analogue is not
// provided; its iteration map is not geometric-mean expressible in closed
// form here).
HermitianMatrix log_mean_matrix(const HermitianMatrix& x, const HermitianMatrix& y);
HermitianMatrix eval_rmk_phi_logmean_matrix(int m, int k, const HermitianMatrix& x,
                                            const HermitianMatrix& y);

}  // namespace oprel
