#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "oprel/errors.hpp"

namespace oprel {

// Gaussian quadrature rule on [0,1]: strictly increasing interior nodes,
// positive weights. Probability-measure rules have weights summing to 1.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::string measure_tag;
  // |computed mass - 1| observed while building a probability rule from a
  // density; the stored weights are normalized.
  double mass_deviation = 0.0;

  double weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
  // sum_j w_j t_j^p
  double discrete_moment(int p) const {
    double s = 0.0;
    for (int j = 0; j < order; ++j) s += weights[j] * std::pow(nodes[j], p);
    return s;
  }
};

// Lebesgue measure on [0,1] (Golub-Welsch on the shifted Legendre Jacobi
// matrix). Exact on polynomials of degree <= 2m-1.
QuadratureRule gauss_legendre(int m);

// Arcsine measure dt / (pi sqrt(t(1-t))): closed-form Chebyshev-Gauss rule,
// nodes (1 + cos((2j-1) pi / 2m))/2 and weights 1/m.
QuadratureRule gauss_arcsine(int m);

// A fine discretization of a measure on (0,1): nodes with positive weights.
struct FineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite Gauss-Legendre panels with geometric grading toward both
// endpoints; at least `min_points` evaluation points.
FineRule graded_fine_rule(const std::function<double(double)>& density, int min_points);

// Stieltjes procedure: orthogonalize against the fine rule, then take the
// eigen-decomposition of the resulting Jacobi matrix. When `probability` is
// set the weights are normalized to sum to 1 and the observed mass deviation
// is recorded on the rule.
QuadratureRule gauss_from_fine_rule(const FineRule& fine, int m, const std::string& tag,
                                    bool probability = true);

// Discretized-Stieltjes rule for a positive density on (0,1). N is the fine
// grid size (default 256 m; must be >= 64 m).
QuadratureRule gauss_from_density(const std::function<double(double)>& density, int m,
                                  int discretization = 0);

// m-point rule from the first 2m moments mu_0..mu_{2m-1} (Chebyshev
// algorithm for the recurrence coefficients, then Golub-Welsch).
QuadratureRule gauss_from_moments(const std::vector<double>& moments, int m,
                                  const std::string& tag);

// dmu(t) = dt / (t(1-t)(pi^2 + log((1-t)/t)^2)). Built on the substitution
// t = 1/(1+e^{pi tan v}), under which the measure becomes uniform in v; this
// resolves the slowly decaying endpoint tails that defeat plain grading.
QuadratureRule log_mean_measure_rule(int m);
FineRule log_mean_fine_rule(int m);

double log_mean_measure_density(double t);
double arcsine_density(double t);

}  // namespace oprel
