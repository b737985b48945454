#include "oprel/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "oprel/rng.hpp"
#include "oprel/scalar_approx.hpp"

namespace oprel {

namespace {

using json = nlohmann::json;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// dense SPD solve for the small oracle Hessians
bool spd_solve(int n, std::vector<double> a, std::vector<double> rhs, std::vector<double>& out) {
  for (int i = 0; i < n; ++i) a[i * n + i] += 1e-13 * (1.0 + std::abs(a[i * n + i]));
  std::vector<double> l(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (int p = 0; p < j; ++p) s -= l[i * n + p] * l[j * n + p];
      if (i == j) {
        if (s <= 0.0) return false;
        l[i * n + i] = std::sqrt(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  out = rhs;
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < i; ++p) out[i] -= l[i * n + p] * out[p];
    out[i] /= l[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int p = i + 1; p < n; ++p) out[i] -= l[p * n + i] * out[p];
    out[i] /= l[i * n + i];
  }
  return true;
}

AffineSlot scalar_const(double v) {
  CMat m(1, 1);
  m(0, 0) = v;
  return AffineSlot::make_const(m);
}

// log sum_q exp(a_q . y + log c_q) with gradient and Hessian
struct LseValue {
  double value = 0.0;
  std::vector<double> grad;
  std::vector<double> hess;  // n x n row-major
};

LseValue lse(const Posynomial& poly, const std::vector<double>& y, bool with_hess) {
  const int n = static_cast<int>(y.size());
  const int q = static_cast<int>(poly.coeff.size());
  std::vector<double> expo(q);
  double top = -1e300;
  for (int t = 0; t < q; ++t) {
    double s = std::log(poly.coeff[t]);
    for (int i = 0; i < n; ++i) s += poly.exponent[t][i] * y[i];
    expo[t] = s;
    top = std::max(top, s);
  }
  double z = 0.0;
  std::vector<double> p(q);
  for (int t = 0; t < q; ++t) {
    p[t] = std::exp(expo[t] - top);
    z += p[t];
  }
  LseValue out;
  out.value = top + std::log(z);
  for (int t = 0; t < q; ++t) p[t] /= z;
  out.grad.assign(n, 0.0);
  for (int t = 0; t < q; ++t)
    for (int i = 0; i < n; ++i) out.grad[i] += p[t] * poly.exponent[t][i];
  if (with_hess) {
    out.hess.assign(n * n, 0.0);
    for (int t = 0; t < q; ++t)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          out.hess[i * n + j] += p[t] * poly.exponent[t][i] * poly.exponent[t][j];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.hess[i * n + j] -= out.grad[i] * out.grad[j];
  }
  return out;
}

}  // namespace

std::string ExperimentReport::to_json() const {
  json j;
  j["subcommand"] = subcommand;
  j["parameters"] = {{"m", m}, {"k", k}, {"n", n}, {"l", l}, {"seed", seed}};
  j["objective_sdp"] = objective_sdp;
  j["objective_oracle"] = objective_oracle;
  j["gap"] = gap;
  j["wall_time_s"] = wall_time_s;
  j["solver_ok"] = solver_ok;
  if (!note.empty()) j["note"] = note;
  return j.dump(2);
}

MaxentInstance make_maxent_instance(int n, int l, uint64_t seed) {
  Rng rng(seed);
  MaxentInstance inst;
  inst.n = n;
  inst.l = l;
  inst.a.resize(static_cast<size_t>(l) * n);
  for (double& v : inst.a) v = rng.gaussian();
  std::vector<double> xbar(n);
  for (int i = 0; i < n; ++i) xbar[i] = 0.2 + rng.uniform();
  inst.b.assign(l, 0.0);
  for (int j = 0; j < l; ++j)
    for (int i = 0; i < n; ++i) inst.b[j] += inst.a[j * n + i] * xbar[i];
  return inst;
}

ScalarSolveResult solve_maxent_sdp(const MaxentInstance& inst, int m, int k,
                                   const SolveOptions& opts) {
  const int n = inst.n, l = inst.l;
  LinearMatrixSystem sys;
  std::vector<int> xs(n), ts(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = sys.add_variable("x" + std::to_string(i), 1, false, VarRole::input);
    ts[i] = sys.add_variable("t" + std::to_string(i), 1, false, VarRole::input);
  }
  for (int i = 0; i < n; ++i)
    append_op_rel_entr(sys, sys.slot(xs[i]), scalar_const(1.0), sys.slot(ts[i]), m, k,
                       "c" + std::to_string(i) + "_", false);
  for (int j = 0; j < l; ++j) {
    AffineSlot row;
    row.dim = 1;
    row.constant = CMat(1, 1);
    row.constant(0, 0) = -inst.b[j];
    for (int i = 0; i < n; ++i)
      if (inst.a[j * n + i] != 0.0) row.terms.push_back({xs[i], inst.a[j * n + i]});
    sys.add_equality("row" + std::to_string(j), {{1.0, row}});
  }
  Objective obj;
  obj.maximize = false;
  for (int i = 0; i < n; ++i) obj.terms.push_back({"t" + std::to_string(i), CMat::identity(1)});

  SolveOptions o = opts;
  o.max_total_dim = std::max(o.max_total_dim, 2 * n * (m + k) + n + 16);
  CompiledProblem cp = compile(sys, obj, {});
  SdpSolution sol = solve(cp.sdp, o);
  ScalarSolveResult res;
  res.value = -cp.original_objective(sol);
  res.ok = sol.status == SdpStatus::optimal;
  if (!res.ok) res.note = "solver status not optimal";
  return res;
}

ScalarSolveResult maxent_dual_oracle(const MaxentInstance& inst) {
  const int n = inst.n, l = inst.l;
  const std::vector<double>& a = inst.a;
  const std::vector<double>& b = inst.b;

  // Newton on the dual g(lambda) = sum_i exp(-1 - (A' lambda)_i) + b . lambda
  std::vector<double> lambda(l, 0.0);
  auto eval_g = [&](const std::vector<double>& lam, std::vector<double>& x) {
    double g = 0.0;
    x.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      double s = -1.0;
      for (int j = 0; j < l; ++j) s -= a[j * n + i] * lam[j];
      x[i] = std::exp(s);
      g += x[i];
    }
    for (int j = 0; j < l; ++j) g += b[j] * lam[j];
    return g;
  };
  std::vector<double> x(n);
  double g = eval_g(lambda, x);
  bool oracle_ok = false;
  for (int it = 0; it < 200; ++it) {
    std::vector<double> grad(l, 0.0);
    for (int j = 0; j < l; ++j) {
      grad[j] = b[j];
      for (int i = 0; i < n; ++i) grad[j] -= a[j * n + i] * x[i];
    }
    double gn = 0.0;
    for (double v : grad) gn = std::max(gn, std::abs(v));
    if (gn <= 1e-12 * std::max(1.0, std::abs(g))) {
      oracle_ok = true;
      break;
    }
    std::vector<double> hess(static_cast<size_t>(l) * l, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < l; ++j) {
        const double aji = a[j * n + i] * x[i];
        if (aji == 0.0) continue;
        for (int j2 = 0; j2 < l; ++j2) hess[j * l + j2] += aji * a[j2 * n + i];
      }
    std::vector<double> step;
    if (!spd_solve(l, hess, grad, step)) break;
    double alpha = 1.0;
    double dec = 0.0;
    for (int j = 0; j < l; ++j) dec += grad[j] * step[j];
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> trial(l);
      for (int j = 0; j < l; ++j) trial[j] = lambda[j] - alpha * step[j];
      std::vector<double> xt;
      const double gt = eval_g(trial, xt);
      if (gt <= g - 1e-4 * alpha * dec) {
        lambda = trial;
        x = xt;
        g = gt;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) {  // decrease below the rounding floor of g
      oracle_ok = gn <= 1e-9 * std::max(1.0, std::abs(g));
      break;
    }
  }
  ScalarSolveResult res;
  res.value = g;
  res.ok = oracle_ok;
  if (!oracle_ok) res.note = "oracle did not reach tolerance";
  return res;
}

ExperimentReport run_maxent(int n, int l, uint64_t seed, int m, int k, const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  MaxentInstance inst = make_maxent_instance(n, l, seed);
  ScalarSolveResult sdp = solve_maxent_sdp(inst, m, k, opts);
  ScalarSolveResult oracle = maxent_dual_oracle(inst);

  ExperimentReport rep;
  rep.subcommand = "maxent";
  rep.m = m;
  rep.k = k;
  rep.n = n;
  rep.l = l;
  rep.seed = seed;
  rep.solver_ok = sdp.ok;
  rep.objective_sdp = sdp.value;
  rep.objective_oracle = oracle.value;
  if (!oracle.ok) rep.note = oracle.note;
  rep.gap = std::abs(rep.objective_sdp - rep.objective_oracle);
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

GpInstance make_gp_instance(int n, int l, int terms, double sparsity, uint64_t seed) {
  Rng rng(seed);
  const int active = std::max(1, static_cast<int>(std::ceil(sparsity * n)));
  auto random_posynomial = [&](int count, double level) {
    Posynomial p;
    for (int t = 0; t < count; ++t) {
      std::vector<double> expo(n, 0.0);
      // choose `active` distinct coordinates
      std::vector<int> idx(n);
      for (int i = 0; i < n; ++i) idx[i] = i;
      for (int i = 0; i < active; ++i) {
        const int pick = i + static_cast<int>(rng.uniform() * (n - i));
        std::swap(idx[i], idx[pick]);
        expo[idx[i]] = rng.gaussian();
      }
      p.exponent.push_back(std::move(expo));
      p.coeff.push_back(0.5 + rng.uniform());
    }
    if (level > 0.0) {  // scale so the posynomial evaluates to `level` at y = 0
      double at0 = 0.0;
      for (double c : p.coeff) at0 += c;
      for (double& c : p.coeff) c *= level / at0;
    }
    return p;
  };

  GpInstance inst;
  inst.n = n;
  inst.objective = random_posynomial(terms, 0.0);
  for (int j = 0; j < l; ++j) inst.constraints.push_back(random_posynomial(terms, 0.5));
  // box posynomial keeping the feasible set compact
  Posynomial box;
  for (int i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> expo(n, 0.0);
      expo[i] = sign;
      box.exponent.push_back(std::move(expo));
      box.coeff.push_back(0.25 / n);
    }
  }
  inst.constraints.push_back(std::move(box));
  return inst;
}

GpSolveResult solve_gp_sdp(const GpInstance& inst, int m, int k, const SolveOptions& opts) {
  LinearMatrixSystem sys;
  const int n = inst.n;
  std::vector<int> ys(n);
  for (int i = 0; i < n; ++i)
    ys[i] = sys.add_variable("y" + std::to_string(i), 1, false, VarRole::input);
  const int s0 = sys.add_variable("s0", 1, false, VarRole::input);

  int zcount = 0;
  auto add_posynomial = [&](const Posynomial& poly, const std::string& tag) {
    std::vector<int> zs;
    for (size_t t = 0; t < poly.coeff.size(); ++t) {
      const int z = sys.add_variable(tag + "_z" + std::to_string(t), 1, false, VarRole::auxiliary);
      zs.push_back(z);
      ++zcount;
      // (1, z / c, -a . y) in the scalar cone: z >= c exp(a . y)
      AffineSlot yslot;
      yslot.dim = 1;
      yslot.constant = CMat(1, 1);
      yslot.terms.push_back({z, 1.0 / poly.coeff[t]});
      AffineSlot tslot;
      tslot.dim = 1;
      tslot.constant = CMat(1, 1);
      for (int i = 0; i < n; ++i)
        if (poly.exponent[t][i] != 0.0) tslot.terms.push_back({ys[i], -poly.exponent[t][i]});
      append_op_rel_entr(sys, scalar_const(1.0), yslot, tslot, m, k,
                         tag + "_c" + std::to_string(t) + "_", false);
    }
    return zs;
  };

  std::vector<int> obj_z = add_posynomial(inst.objective, "obj");
  {
    LmiBlock& blk = sys.new_block(1, "objective epigraph");
    blk.add_term(0, 0, s0, 0, 0, 1.0);
    for (int z : obj_z) blk.add_term(0, 0, z, 0, 0, -1.0);
  }
  for (size_t j = 0; j < inst.constraints.size(); ++j) {
    std::vector<int> zs = add_posynomial(inst.constraints[j], "g" + std::to_string(j));
    LmiBlock& blk = sys.new_block(1, "constraint " + std::to_string(j));
    blk.add_constant(0, 0, 1.0);
    for (int z : zs) blk.add_term(0, 0, z, 0, 0, -1.0);
  }

  Objective obj;
  obj.maximize = false;
  obj.terms.push_back({"s0", CMat::identity(1)});
  SolveOptions o = opts;
  o.max_total_dim = std::max(o.max_total_dim, 2 * zcount * (m + k) + zcount + n + 32);

  GpSolveResult res;
  CompiledProblem cp = compile(sys, obj, {});
  SdpSolution sol = solve(cp.sdp, o);
  res.value = cp.original_objective(sol);
  res.ok = sol.status == SdpStatus::optimal;
  if (!res.ok) res.note = "solver status not optimal";
  return res;
}

GpSolveResult solve_gp_oracle(const GpInstance& inst) {
  const int n = inst.n;
  const int nc = static_cast<int>(inst.constraints.size());
  std::vector<double> y(n, 0.0);
  GpSolveResult res;

  // Damped Newton on t f0 - sum log(-f_j); the stage stop uses the Newton
  // decrement, and a stalled line search near the rounding floor counts as
  // centered. Only leaving the interior or a factorization failure is fatal.
  auto newton = [&](double t_weight, bool barrier) -> bool {
    for (int it = 0; it < 60; ++it) {
      LseValue f0 = lse(inst.objective, y, true);
      double value = t_weight * f0.value;
      std::vector<double> grad(n);
      std::vector<double> hess(static_cast<size_t>(n) * n);
      for (int i = 0; i < n; ++i) grad[i] = t_weight * f0.grad[i];
      for (int i = 0; i < n * n; ++i) hess[i] = t_weight * f0.hess[i];
      if (barrier) {
        for (const Posynomial& c : inst.constraints) {
          LseValue f = lse(c, y, true);
          if (f.value >= 0.0) return false;  // left the interior
          value -= std::log(-f.value);
          const double inv = -1.0 / f.value;
          for (int i = 0; i < n; ++i) grad[i] += inv * f.grad[i];
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              hess[i * n + j] +=
                  inv * f.hess[i * n + j] + inv * inv * f.grad[i] * f.grad[j];
        }
      }
      double gn = 0.0;
      for (double v : grad) gn = std::max(gn, std::abs(v));
      if (gn <= 1e-9 * std::max(1.0, t_weight)) return true;
      std::vector<double> step;
      if (!spd_solve(n, hess, grad, step)) return false;
      double dec = 0.0;
      for (int i = 0; i < n; ++i) dec += grad[i] * step[i];
      if (dec <= 1e-16 * std::max(1.0, t_weight)) return true;
      double alpha = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt) {
        std::vector<double> trial(n);
        for (int i = 0; i < n; ++i) trial[i] = y[i] - alpha * step[i];
        // feasibility for the barrier
        bool inside = true;
        if (barrier)
          for (const Posynomial& c : inst.constraints)
            if (lse(c, trial, false).value >= 0.0) {
              inside = false;
              break;
            }
        if (inside) {
          double tv = t_weight * lse(inst.objective, trial, false).value;
          if (barrier)
            for (const Posynomial& c : inst.constraints)
              tv -= std::log(-lse(c, trial, false).value);
          if (tv <= value - 1e-4 * alpha * dec) {
            y = trial;
            moved = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!moved) return true;  // decrease below the rounding floor
    }
    return true;  // centered enough for the path to continue
  };

  bool ok = true;
  if (nc == 0) {
    ok = newton(1.0, false);
  } else {
    for (const Posynomial& c : inst.constraints)
      if (lse(c, y, false).value >= 0.0) {
        res.note = "oracle start infeasible";
        res.ok = false;
        return res;
      }
    double t = 1.0;
    while (nc / t > 1e-9) {
      if (!newton(t, true)) {
        ok = false;
        break;
      }
      t *= 8.0;
    }
  }
  res.value = std::exp(lse(inst.objective, y, false).value);
  res.ok = ok;
  if (!ok) res.note = "oracle did not converge";
  return res;
}

ExperimentReport run_gp(int n, int l, int terms, double sparsity, uint64_t seed, int m, int k,
                        const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  GpInstance inst = make_gp_instance(n, l, terms, sparsity, seed);
  GpSolveResult sdp = solve_gp_sdp(inst, m, k, opts);
  GpSolveResult oracle = solve_gp_oracle(inst);

  ExperimentReport rep;
  rep.subcommand = "gp";
  rep.m = m;
  rep.k = k;
  rep.n = n;
  rep.l = l;
  rep.seed = seed;
  rep.objective_sdp = sdp.value;
  rep.objective_oracle = oracle.value;
  rep.gap = std::abs(sdp.value - oracle.value);
  rep.solver_ok = sdp.ok && oracle.ok;
  if (!sdp.note.empty()) rep.note = sdp.note;
  if (!oracle.note.empty()) rep.note += (rep.note.empty() ? "" : "; ") + oracle.note;
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

ScalarSolveResult solve_tracevar_sdp(const HermitianMatrix& y, int m, int k,
                                     const SolveOptions& opts) {
  const int n = y.dim();
  bool complex_input = false;
  for (int i = 0; i < n && !complex_input; ++i)
    for (int j = 0; j < n; ++j)
      if (std::imag(y(i, j)) != 0.0) {
        complex_input = true;
        break;
      }
  LinearMatrixSystem sys = quantum_rel_entr_epigraph(n, m, k, QreMode::reduced, complex_input);
  Objective obj;
  obj.maximize = true;  // Tr X - tau
  obj.terms.push_back({"A", CMat::identity(n)});
  CMat neg(1, 1);
  neg(0, 0) = -1.0;
  obj.terms.push_back({"tau", neg});

  Assignment fix{{"B", y}};
  CompiledProblem cp = compile(sys, obj, fix);
  SdpSolution sol = solve(cp.sdp, opts);
  ScalarSolveResult res;
  res.value = cp.original_objective(sol);
  res.ok = sol.status == SdpStatus::optimal;
  if (!res.ok) res.note = "solver status not optimal";
  return res;
}

ExperimentReport run_tracevar(int n, uint64_t seed, int m, int k, const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  HermitianMatrix y = rng.unit_trace_pd(n, false);
  ScalarSolveResult sdp = solve_tracevar_sdp(y, m, k, opts);

  ExperimentReport rep;
  rep.subcommand = "tracevar";
  rep.m = m;
  rep.k = k;
  rep.n = n;
  rep.l = 0;
  rep.seed = seed;
  rep.objective_sdp = sdp.value;
  rep.objective_oracle = y.trace();  // exactly Tr Y by the variational identity
  rep.gap = std::abs(rep.objective_sdp - rep.objective_oracle);
  rep.solver_ok = sdp.ok;
  rep.note = sdp.note;
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

std::vector<double> log_spaced_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i)
    g[i] = std::exp(a + (b - a) * (points == 1 ? 0.0 : i / (points - 1.0)));
  return g;
}

std::vector<ApproxErrorRow> approx_error_table(const std::vector<int>& ms,
                                               const std::vector<int>& ks,
                                               const std::vector<double>& grid, int jobs) {
  std::vector<std::pair<int, int>> pairs;
  for (int m : ms)
    for (int k : ks) pairs.push_back({m, k});
  std::vector<ApproxErrorRow> rows(pairs.size() * grid.size());

  auto work = [&](size_t first, size_t last) {
    for (size_t p = first; p < last; ++p) {
      const auto [m, k] = pairs[p];
      RationalApproximant approx = log_approximant(m, k);
      for (size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        ApproxErrorRow& row = rows[p * grid.size() + i];
        row.x = x;
        row.m = m;
        row.k = k;
        row.error = std::abs(eval_rmk(approx, x) - std::log(x));
        row.bound = error_bound_log(x, m, k);
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(pairs.size())));
  if (threads == 1) {
    work(0, pairs.size());
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (pairs.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const size_t first = t * chunk;
      const size_t last = std::min(pairs.size(), first + chunk);
      if (first < last) pool.emplace_back(work, first, last);
    }
    for (std::thread& th : pool) th.join();
  }
  return rows;
}

std::string approx_error_csv(const std::vector<ApproxErrorRow>& rows) {
  std::ostringstream out;
  out << "x,m,k,error,bound\n";
  char buf[96];
  for (const ApproxErrorRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%d,%d,%.12g,%.12g\n", r.x, r.m, r.k, r.error, r.bound);
    out << buf;
  }
  return out.str();
}

std::string approx_error_json(const std::vector<ApproxErrorRow>& rows) {
  json arr = json::array();
  for (const ApproxErrorRow& r : rows)
    arr.push_back({{"x", r.x}, {"m", r.m}, {"k", r.k}, {"error", r.error}, {"bound", r.bound}});
  return arr.dump(2);
}

}  // namespace oprel
