// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "oprel/experiments.hpp"
#include "oprel/funceq.hpp"
#include "oprel/rng.hpp"

using namespace oprel;

namespace {

int failures = 0;

void run_criterion(int number, const std::string& label, double time_limit_s,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (dt > time_limit_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("runtime ") + std::to_string(dt) +
              "s exceeds " + std::to_string(time_limit_s) + "s";
  }
  std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number, label.c_str(),
              dt, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double log_series_coeff(int p) { return p == 0 ? 0.0 : (p % 2 == 1 ? 1.0 : -1.0) / p; }

bool check_rule_exactness(const QuadratureRule& rule, const std::function<double(int)>& moment,
                          double tol, std::string& detail) {
  for (int p = 0; p <= 2 * rule.order - 1; ++p) {
    const double err = std::abs(rule.discrete_moment(p) - moment(p));
    if (err > tol) {
      detail = "rule '" + rule.measure_tag + "' m=" + std::to_string(rule.order) +
               " moment p=" + std::to_string(p) + " error " + std::to_string(err);
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  run_criterion(1, "Pade equivalence of the log approximants, m = 1..5", 1.0,
                [](std::string& detail) {
                  for (int m = 1; m <= 5; ++m) {
                    const int count = taylor_match_order(log_approximant(m), log_series_coeff);
                    if (count < 2 * m + 1) {
                      detail = "m=" + std::to_string(m) + " matched only " +
                               std::to_string(count) + " coefficients";
                      return false;
                    }
                  }
                  return true;
                });

  run_criterion(2, "error-bound domination on a 400-point grid, m <= 6, k <= 6", 5.0,
                [](std::string& detail) {
                  const std::vector<double> grid = log_spaced_grid(1e-3, 1e3, 400);
                  for (int m = 1; m <= 6; ++m)
                    for (int k = 0; k <= 6; ++k) {
                      RationalApproximant a = log_approximant(m, k);
                      for (double x : grid) {
                        const double err = std::abs(eval_rmk(a, x) - std::log(x));
                        const double cap = error_bound_log(x, m, k) * (1.0 + 1e-8) + 1e-14;
                        if (err > cap) {
                          detail = "x=" + std::to_string(x) + " m=" + std::to_string(m) +
                                   " k=" + std::to_string(k);
                          return false;
                        }
                      }
                    }
                  return true;
                });

  run_criterion(3, "parameter guarantee of choose_params_log(e, 1e-8)", 2.0,
                [](std::string& detail) {
                  LogParams p = choose_params_log(std::exp(1.0), 1e-8);
                  if (p.m + p.k > 12) {
                    detail = "m+k = " + std::to_string(p.m + p.k);
                    return false;
                  }
                  RationalApproximant a = log_approximant(p.m, p.k);
                  double sup = 0.0;
                  const std::vector<double> grid =
                      log_spaced_grid(std::exp(-1.0), std::exp(1.0), 10000);
                  for (double x : grid) sup = std::max(sup, std::abs(eval_rmk(a, x) - std::log(x)));
                  if (sup > 1e-8) {
                    detail = "sup error " + std::to_string(sup);
                    return false;
                  }
                  return true;
                });

  run_criterion(
      4, "representation equivalence: IPM feasibility vs matrix-function oracle, 100 triples",
      60.0, [](std::string& detail) {
        Rng rng(20240831);
        for (int trial = 0; trial < 100; ++trial) {
          const int n = 1 + static_cast<int>(rng.uniform() * 3);
          const int m = 1 + static_cast<int>(rng.uniform() * 3);
          const int k = static_cast<int>(rng.uniform() * 3);
          HermitianMatrix x = rng.positive_definite(n);
          HermitianMatrix y = rng.positive_definite(n);
          HermitianMatrix base = -1.0 * perspective_rmk(m, k, y, x);
          // perturbations stay well off the 1e-6 boundary band
          const double delta = (trial % 2 == 0 ? 1.0 : -1.0) * (1e-3 + rng.uniform() * 1e-2);
          HermitianMatrix t = base + delta * HermitianMatrix::identity(n);

          LinearMatrixSystem sys = op_rel_entr_epi_cone(n, m, k, true);
          Assignment fix{{"X", x}, {"Y", y}, {"T", t}};
          CompiledProblem cp = compile(sys, Objective::none(), fix);
          const bool ipm = solve_feasibility(cp.sdp).feasible;
          const bool oracle = check_membership(x, y, t, m, k, MembershipMethod::oracle);
          if (ipm != oracle) {
            detail = "disagreement at trial " + std::to_string(trial);
            return false;
          }
        }
        return true;
      });

  run_criterion(5, "lifting identity on 50 random complex pairs, n <= 4", 10.0,
                [](std::string& detail) {
                  Rng rng(77);
                  for (int trial = 0; trial < 50; ++trial) {
                    const int n = 2 + static_cast<int>(rng.uniform() * 3);
                    HermitianMatrix a = rng.positive_definite(n);
                    HermitianMatrix b = rng.positive_definite(n);
                    const double res = lift_identity_residual(a, b);
                    if (res > 1e-9) {
                      detail = "residual " + std::to_string(res);
                      return false;
                    }
                  }
                  return true;
                });

  run_criterion(6, "midpoint operator concavity of the perspective, 200 samples", 30.0,
                [](std::string& detail) {
                  Rng rng(99);
                  for (int trial = 0; trial < 200; ++trial) {
                    const int n = 2 + static_cast<int>(rng.uniform() * 3);
                    const int m = 1 + static_cast<int>(rng.uniform() * 3);
                    const int k = static_cast<int>(rng.uniform() * 4);
                    HermitianMatrix x1 = rng.positive_definite(n);
                    HermitianMatrix x2 = rng.positive_definite(n);
                    HermitianMatrix y1 = rng.positive_definite(n);
                    HermitianMatrix y2 = rng.positive_definite(n);
                    HermitianMatrix mid =
                        perspective_rmk(m, k, 0.5 * (y1 + y2), 0.5 * (x1 + x2));
                    HermitianMatrix avg =
                        0.5 * (perspective_rmk(m, k, y1, x1) + perspective_rmk(m, k, y2, x2));
                    const double lam = min_eigenvalue(mid - avg);
                    if (lam < -1e-9) {
                      detail = "lambda_min " + std::to_string(lam);
                      return false;
                    }
                  }
                  return true;
                });

  run_criterion(7, "variational trace identity, n in {2,3,4} at (m,k) = (3,3)", 120.0,
                [](std::string& detail) {
                  for (int n : {2, 3, 4}) {
                    ExperimentReport rep = run_tracevar(n, 1, 3, 3);
                    if (!rep.solver_ok || rep.gap > 1e-4) {
                      detail = "n=" + std::to_string(n) + " gap=" + std::to_string(rep.gap);
                      return false;
                    }
                  }
                  return true;
                });

  run_criterion(8, "entropy maximization, n=50 l=25 seeded, gap <= 1e-5", 60.0,
                [](std::string& detail) {
                  ExperimentReport rep = run_maxent(50, 25, 1, 3, 3);
                  char buf[48];
                  std::snprintf(buf, sizeof buf, "gap=%.3e", rep.gap);
                  detail = buf;
                  return rep.solver_ok && rep.gap <= 1e-5;
                });

  run_criterion(9, "geometric programming, n=10 l=10 five-term posynomials, gap <= 1e-5", 60.0,
                [](std::string& detail) {
                  ExperimentReport rep = run_gp(10, 10, 5, 0.3, 1, 3, 3);
                  char buf[48];
                  std::snprintf(buf, sizeof buf, "gap=%.3e", rep.gap);
                  detail = buf;
                  return rep.solver_ok && rep.gap <= 1e-5;
                });

  run_criterion(10, "functional equations: contractions, elliptic identity, cone boundaries",
                10.0, [](std::string& detail) {
                  MeanIteration lm = log_mean_iteration();
                  MeanIteration am = agm_iteration();
                  Rng rng(55);
                  for (int i = 0; i < 1000; ++i) {
                    const double x = std::exp(rng.uniform(-3.0, 3.0));
                    const double y = std::exp(rng.uniform(-3.0, 3.0));
                    if (x == y) continue;
                    if (std::abs(contraction_ratio(lm, x, y) - 0.5) > 1e-12) {
                      detail = "log-mean ratio off 1/2";
                      return false;
                    }
                    if (contraction_ratio(am, x, y) > 0.5 + 1e-15 ||
                        quadratic_ratio(am, x, y) > 0.125 + 1e-15) {
                      detail = "agm contraction bound violated";
                      return false;
                    }
                  }
                  for (double x : {0.1, 0.5, 0.9}) {
                    const double res = std::abs(
                        agm(1.0 + x, 1.0 - x) * (2.0 / M_PI) * oracles::elliptic_k(x) - 1.0);
                    if (res > 1e-8) {
                      detail = "elliptic residual " + std::to_string(res);
                      return false;
                    }
                  }
                  // cone boundaries at (m,k) = (2,3) within 1e-3 of the oracles
                  auto boundary_ok = [&](const MeanIteration& iter, double x, double y) {
                    LinearMatrixSystem cone = funceq_cone(iter, 2, 3);
                    const double target = iter.target(x, y);
                    auto feas = [&](double tau) {
                      Assignment fix{{"x", HermitianMatrix::diagonal({x})},
                                     {"y", HermitianMatrix::diagonal({y})},
                                     {"tau", HermitianMatrix::diagonal({tau})}};
                      CompiledProblem cp = compile(cone, Objective::none(), fix);
                      return solve_feasibility(cp.sdp).feasible;
                    };
                    return feas(target - 1e-3) && !feas(target + 1e-3);
                  };
                  if (!boundary_ok(lm, std::exp(1.0), 1.0)) {
                    detail = "log-mean cone boundary off";
                    return false;
                  }
                  if (!boundary_ok(am, 2.0, 1.0)) {
                    detail = "agm cone boundary off";
                    return false;
                  }
                  return true;
                });

  run_criterion(11, "quadrature exactness and arcsine cross-check", 2.0,
                [](std::string& detail) {
                  for (int m : {1, 2, 3, 4, 5, 6, 7, 8, 16, 32, 64}) {
                    if (!check_rule_exactness(
                            gauss_legendre(m), [](int p) { return 1.0 / (p + 1); }, 1e-12, detail))
                      return false;
                  }
                  for (int m : {1, 2, 3, 4, 6, 8}) {
                    if (!check_rule_exactness(gauss_arcsine(m), oracles::arcsine_moment, 1e-12,
                                              detail))
                      return false;
                  }
                  {
                    std::vector<double> mu = agm_mu_moments(8);
                    QuadratureRule rule = gauss_from_moments(mu, 4, "agm-measure");
                    if (!check_rule_exactness(rule, [&](int p) { return mu[p]; }, 1e-12, detail))
                      return false;
                  }
                  // Stieltjes rules are exact against their fine discretization
                  for (int m : {2, 3}) {
                    QuadratureRule rule = log_mean_measure_rule(m);
                    FineRule fine = log_mean_fine_rule(m);
                    auto fine_moment = [&](int p) {
                      double s = 0.0;
                      for (size_t i = 0; i < fine.nodes.size(); ++i)
                        s += fine.weights[i] * std::pow(fine.nodes[i], p);
                      return s;
                    };
                    if (!check_rule_exactness(rule, fine_moment, 1e-10, detail)) return false;
                  }
                  // closed form vs discretized-Stieltjes construction
                  for (int m : {1, 2, 3}) {
                    QuadratureRule stj = gauss_from_density(arcsine_density, m);
                    QuadratureRule cf = gauss_arcsine(m);
                    for (int j = 0; j < m; ++j) {
                      if (std::abs(stj.nodes[j] - cf.nodes[j]) > 1e-8 ||
                          std::abs(stj.weights[j] - cf.weights[j]) > 1e-8) {
                        detail = "arcsine cross-check at m=" + std::to_string(m);
                        return false;
                      }
                    }
                  }
                  return true;
                });

  run_criterion(12, "sign and antisymmetry of r_m", 1.0, [](std::string& detail) {
    const std::vector<double> below = log_spaced_grid(1e-3, 1.0, 100);
    const std::vector<double> above = log_spaced_grid(1.0, 1e3, 100);
    for (int m = 1; m <= 8; ++m) {
      RationalApproximant a = log_approximant(m);
      for (double x : below) {
        if (eval_rm(a, x) - std::log(x) < -1e-12 ||
            std::abs(eval_rm(a, 1.0 / x) + eval_rm(a, x)) > 1e-12) {
          detail = "m=" + std::to_string(m) + " x=" + std::to_string(x);
          return false;
        }
      }
      for (double x : above)
        if (eval_rm(a, x) - std::log(x) > 1e-12) {
          detail = "m=" + std::to_string(m) + " x=" + std::to_string(x);
          return false;
        }
    }
    return true;
  });

  run_criterion(13, "SDPA round-trip identity over the compiled test systems", 2.0,
                [](std::string& detail) {
                  std::vector<std::pair<std::string, CompiledProblem>> problems;
                  problems.push_back(
                      {"hypograph_ft", compile(hypograph_ft(0.5, 1),
                                               Objective::trace_of("T", 1, true),
                                               {{"X", HermitianMatrix::diagonal({2.0})}})});
                  problems.push_back(
                      {"op_rel_entr(1,3,3)",
                       compile(op_rel_entr_epi_cone(1, 3, 3), Objective::trace_of("T", 1, false),
                               {{"X", HermitianMatrix::diagonal({1.0})},
                                {"Y", HermitianMatrix::diagonal({std::exp(1.0)})}})});
                  problems.push_back({"op_rel_entr(2,2,2)",
                                      compile(op_rel_entr_epi_cone(2, 2, 2, true),
                                              Objective::trace_of("T", 2, false), {})});
                  problems.push_back({"quantum_rel_entr reduced n=2",
                                      compile(quantum_rel_entr_epigraph(2, 2, 2, QreMode::reduced),
                                              Objective::none(),
                                              {{"A", 0.5 * HermitianMatrix::identity(2)},
                                               {"B", 0.5 * HermitianMatrix::identity(2)},
                                               {"tau", HermitianMatrix::diagonal({0.1})}})});
                  problems.push_back(
                      {"quantum_entr n=2",
                       compile(quantum_entr_hypograph(2, 2, 2), Objective::none(),
                               {{"rho", 0.5 * HermitianMatrix::identity(2)},
                                {"tau", HermitianMatrix::diagonal({0.5})}})});
                  problems.push_back(
                      {"trace_logm n=2",
                       compile(trace_logm_epigraph(HermitianMatrix::identity(2), 2, 2, 2),
                               Objective::trace_of("tau", 1, true),
                               {{"rho", HermitianMatrix::identity(2)}})});
                  problems.push_back({"funceq log-mean (2,3)",
                                      compile(funceq_cone(log_mean_iteration(), 2, 3),
                                              Objective::trace_of("tau", 1, true),
                                              {{"x", HermitianMatrix::diagonal({2.0})},
                                               {"y", HermitianMatrix::diagonal({1.0})}})});
                  problems.push_back({"funceq agm (2,2)",
                                      compile(funceq_cone(agm_iteration(), 2, 2),
                                              Objective::trace_of("tau", 1, true),
                                              {{"x", HermitianMatrix::diagonal({2.0})},
                                               {"y", HermitianMatrix::diagonal({1.0})}})});

                  for (const auto& [name, cp] : problems) {
                    const std::string text = export_sdpa(cp.sdp);
                    BlockSdp back = import_sdpa(text);
                    if (export_sdpa(back) != text) {
                      detail = "round-trip mismatch for " + name;
                      return false;
                    }
                    if (back.num_vars != cp.sdp.num_vars ||
                        back.blocks.size() != cp.sdp.blocks.size()) {
                      detail = "structure mismatch for " + name;
                      return false;
                    }
                    for (size_t b = 0; b < back.blocks.size(); ++b)
                      if (back.blocks[b].size != cp.sdp.blocks[b].size ||
                          back.blocks[b].diagonal != cp.sdp.blocks[b].diagonal) {
                        detail = "block structure mismatch for " + name;
                        return false;
                      }
                  }
                  return true;
                });

  if (failures == 0) {
    std::printf("all 13 criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return 1;
}
