#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "oprel/compile.hpp"
#include "oprel/funceq.hpp"
#include "oprel/rng.hpp"

using namespace oprel;

namespace {

bool cone_feasible(const LinearMatrixSystem& sys, double x, double y, double tau) {
  Assignment fix{{"x", HermitianMatrix::diagonal({x})},
                 {"y", HermitianMatrix::diagonal({y})},
                 {"tau", HermitianMatrix::diagonal({tau})}};
  CompiledProblem cp = compile(sys, Objective::none(), fix);
  return solve_feasibility(cp.sdp).feasible;
}

}  // namespace

TEST_SUITE_BEGIN("funceq");

TEST_CASE("agm basics") {
  for (double a : {0.3, 1.0, 7.5}) CHECK(agm(a, a) == doctest::Approx(a).epsilon(1e-14));
  CHECK(agm(2.0, 1.0) == doctest::Approx(1.4567910).epsilon(1e-7));
  CHECK(agm(3.0, 5.0) == agm(5.0, 3.0));
  CHECK(agm(6.0, 2.0) == doctest::Approx(2.0 * agm(3.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("agm-elliptic identity") {
  for (double x : {0.1, 0.5, 0.9}) {
    const double residual =
        std::abs(agm(1.0 + x, 1.0 - x) * (2.0 / M_PI) * oracles::elliptic_k(x) - 1.0);
    CHECK(residual <= 1e-8);
  }
}

TEST_CASE("log_mean basics") {
  for (double a : {0.4, 1.0, 3.2}) CHECK(log_mean(a, a) == a);
  CHECK(log_mean(std::exp(1.0), 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));

  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const double x = std::exp(rng.uniform(-2.0, 2.0));
    const double y = std::exp(rng.uniform(-2.0, 2.0));
    const double g = std::sqrt(x * y);
    const double moved = log_mean(0.5 * (x + g), 0.5 * (y + g));
    CHECK(std::abs(moved - log_mean(x, y)) <= 1e-13 * std::max(1.0, log_mean(x, y)));
  }
}

TEST_CASE("agm measure moments") {
  std::vector<double> mu = agm_mu_moments(8);
  CHECK(mu[0] == doctest::Approx(1.0));
  CHECK(mu[1] == doctest::Approx(0.5).epsilon(1e-12));  // symmetric measure
  // moment sequence of a measure on [0,1]: decreasing, positive
  for (int p = 1; p < 8; ++p) {
    CHECK(mu[p] > 0.0);
    CHECK(mu[p] <= mu[p - 1] + 1e-15);
  }
  // symmetry: mu_2 - mu_1 + 1/4-ish relations via the reflected measure
  // int (1-t)^2 = 1 - 2 mu_1 + mu_2 must equal mu_2
  CHECK(1.0 - 2.0 * mu[1] + mu[2] == doctest::Approx(mu[2]).epsilon(1e-10));
}

TEST_CASE("eval_rmk_phi at the diagonal") {
  MeanIteration lm = log_mean_iteration();
  MeanIteration am = agm_iteration();
  for (double v : {0.5, 1.0, 2.5}) {
    CHECK(eval_rmk_phi(lm, 2, 3, v, v) == v);  // g(1) * v exactly
    CHECK(eval_rmk_phi(am, 2, 2, v, v) == v);
  }
}

TEST_CASE("eval_rmk_phi against the oracles") {
  MeanIteration lm = log_mean_iteration();
  const double e = std::exp(1.0);
  // the error is governed by the positive-variant bound at the contracted
  // pair, scaled by its second component
  {
    const int m = 2, k = 3;
    double x = e, y = 1.0;
    for (int i = 0; i < k; ++i) {
      const double nx = lm.p_h1(x, y), ny = lm.p_h2(x, y);
      x = nx;
      y = ny;
    }
    const double bound = y * error_bound_positive(x / y, m, lm.g0, lm.g1);
    const double err = std::abs(eval_rmk_phi(lm, m, k, e, 1.0) - (e - 1.0));
    CHECK(err <= bound);
    CHECK(err <= 1e-5);
  }
  CHECK(std::abs(eval_rmk_phi(lm, 3, 3, e, 1.0) - (e - 1.0)) <= 1e-8);

  MeanIteration am = agm_iteration();
  CHECK(std::abs(eval_rmk_phi(am, 2, 2, 2.0, 1.0) - agm(2.0, 1.0)) <= 1e-6);
}

TEST_CASE("contraction ratios") {
  MeanIteration lm = log_mean_iteration();
  MeanIteration am = agm_iteration();
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(rng.uniform(-3.0, 3.0));
    const double y = std::exp(rng.uniform(-3.0, 3.0));
    if (x == y) continue;
    CHECK(std::abs(contraction_ratio(lm, x, y) - 0.5) <= 1e-12);
    CHECK(contraction_ratio(am, x, y) <= 0.5 + 1e-15);
    CHECK(quadratic_ratio(am, x, y) <= 0.125 + 1e-15);
  }
  CHECK_THROWS_AS(contraction_ratio(lm, 2.0, 2.0), DomainError);
}

TEST_CASE("choose_params_funceq") {
  MeanIteration lm = log_mean_iteration();

  // linear branch: halving eps adds one to the k^2 threshold
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    FunceqParams p = choose_params_funceq(lm, 2.0, eps);
    const double lead = 8.0 * 3.0 / (3.0 * eps);
    const double target = std::sqrt(std::log2(lead));
    int expect_k = 0;
    while (static_cast<double>(expect_k) < std::max(2.0 * std::log2(std::log(2.0)), target))
      expect_k += 2;
    CHECK(p.k == expect_k);
    CHECK(p.m == std::max(1, p.k));

    // grid guarantee
    double sup = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = std::exp(-std::log(2.0) + 2.0 * std::log(2.0) * i / 200.0);
      sup = std::max(sup, std::abs(eval_rmk_phi(lm, p.m, p.k, x, 1.0) - lm.target(x, 1.0)));
    }
    CHECK(sup <= eps);
  }

  // quadratic branch for the AGM
  MeanIteration am = agm_iteration();
  FunceqParams q = choose_params_funceq(am, 2.0, 1e-12);
  CHECK(q.k <= 10);
  double sup = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = std::exp(-std::log(2.0) + 2.0 * std::log(2.0) * i / 200.0);
    sup = std::max(sup, std::abs(eval_rmk_phi(am, q.m, q.k, x, 1.0) - am.target(x, 1.0)));
  }
  CHECK(sup <= 1e-12);

  // generous tolerance floors out
  FunceqParams tiny = choose_params_funceq(am, 1.2, 10.0);
  CHECK(tiny.m == 1);
  CHECK(tiny.k == 0);
}

TEST_CASE("funceq cone membership") {
  MeanIteration lm = log_mean_iteration();
  LinearMatrixSystem lm_cone = funceq_cone(lm, 2, 3);

  CHECK(cone_feasible(lm_cone, 1.0, 1.0, 1.0 - 1e-9));   // boundary g(1) = 1
  CHECK_FALSE(cone_feasible(lm_cone, 1.0, 1.0, 1.0 + 1e-4));

  const double e = std::exp(1.0);
  CHECK(cone_feasible(lm_cone, e, 1.0, e - 1.0 - 1e-3));
  CHECK_FALSE(cone_feasible(lm_cone, e, 1.0, e - 1.0 + 1e-3));

  MeanIteration am = agm_iteration();
  LinearMatrixSystem am_cone = funceq_cone(am, 2, 2);
  CHECK(cone_feasible(am_cone, 2.0, 1.0, agm(2.0, 1.0) - 1e-3));
  CHECK_FALSE(cone_feasible(am_cone, 2.0, 1.0, agm(2.0, 1.0) + 1e-3));
}

TEST_CASE("funceq cone block accounting") {
  MeanIteration lm = log_mean_iteration();
  MeanIteration am = agm_iteration();
  for (int m : {1, 2, 3}) {
    for (int k : {0, 1, 3}) {
      LinearMatrixSystem a = funceq_cone(lm, m, k);
      int total = 0;
      for (const LmiBlock& blk : a.blocks)
        if (blk.size >= 2) total += blk.size;
      CHECK(total == 2 * m + 4 * k);

      LinearMatrixSystem b = funceq_cone(am, m, k);
      total = 0;
      for (const LmiBlock& blk : b.blocks)
        if (blk.size >= 2) total += blk.size;
      CHECK(total == 2 * m + 2 * k);
    }
  }
}

TEST_CASE("joint monotonicity and midpoint concavity") {
  MeanIteration am = agm_iteration();
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const double x = std::exp(rng.uniform(-1.5, 1.5));
    const double y = std::exp(rng.uniform(-1.5, 1.5));
    const double base = eval_rmk_phi(am, 2, 2, x, y);
    CHECK(eval_rmk_phi(am, 2, 2, x * 1.01, y) >= base - 1e-12);
    CHECK(eval_rmk_phi(am, 2, 2, x, y * 1.01) >= base - 1e-12);

    const double x2 = std::exp(rng.uniform(-1.5, 1.5));
    const double y2 = std::exp(rng.uniform(-1.5, 1.5));
    const double mid = eval_rmk_phi(am, 2, 2, 0.5 * (x + x2), 0.5 * (y + y2));
    const double avg = 0.5 * (base + eval_rmk_phi(am, 2, 2, x2, y2));
    CHECK(mid >= avg - 1e-10);
  }
}

TEST_CASE("agm error decays at a quadratic-exponential rate") {
  MeanIteration am = agm_iteration();
  const int m = 2;
  auto sup_error = [&](int k) {
    double sup = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double x = 0.5 * std::pow(4.0, i / 100.0);
      sup = std::max(sup, std::abs(eval_rmk_phi(am, m, k, x, 1.0) - agm(x, 1.0)));
    }
    return std::max(sup, 1e-15);  // machine floor
  };
  double prev = sup_error(0);
  for (int k : {2, 4}) {
    const double cur = sup_error(k);
    if (prev > 1e-14)  // below that both sides sit at the machine floor
      CHECK(std::log(cur) <= 2.0 * std::log(prev) + 1.0);
    prev = cur;
  }
}

TEST_CASE("matrix logarithmic mean") {
  Rng rng(23);
  HermitianMatrix x = rng.positive_definite(3);
  HermitianMatrix y = rng.positive_definite(3);

  // scalar reduction
  CHECK(std::real(log_mean_matrix(HermitianMatrix::diagonal({2.0}),
                                  HermitianMatrix::diagonal({1.0}))(0, 0)) ==
        doctest::Approx(log_mean(2.0, 1.0)).epsilon(1e-12));

  HermitianMatrix approx = eval_rmk_phi_logmean_matrix(3, 3, x, y);
  HermitianMatrix exact = log_mean_matrix(x, y);
  CHECK((approx - exact).mat().frobenius_norm() <= 1e-6 * (1.0 + exact.frobenius_norm()));
}

TEST_SUITE_END();
