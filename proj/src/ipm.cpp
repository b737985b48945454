#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <vector>

#include "oprel/blocksdp.hpp"

namespace oprel {

namespace {

// --- dense real symmetric helpers (row-major, full storage) ---

using Vec = std::vector<double>;

void mat_mul(int n, const double* a, const double* b, double* c) {
  std::memset(c, 0, sizeof(double) * n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      if (aik == 0.0) continue;
      const double* brow = b + k * n;
      double* crow = c + i * n;
      for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
}

void symmetrize(int n, double* a) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a[i * n + j] + a[j * n + i]);
      a[i * n + j] = v;
      a[j * n + i] = v;
    }
}

double frob(int n, const double* a) {
  double s = 0.0;
  for (int i = 0; i < n * n; ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

// Cyclic Jacobi for real symmetric matrices; a is overwritten with the
// diagonalized matrix, v receives the accumulated rotations (columns are
// eigenvectors).
void sym_eig(int n, Vec a, Vec& evals, Vec& evecs, const std::string& context) {
  evecs.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) evecs[i * n + i] = 1.0;
  evals.resize(n);
  if (n == 1) {
    evals[0] = a[0];
    return;
  }
  const double norm = std::max(frob(n, a.data()), 1e-300);
  const int max_sweeps = 50;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * a[i * n + j] * a[i * n + j];
    if (std::sqrt(off) <= 1e-14 * norm) break;
    if (sweep == max_sweeps - 1)
      throw NumericalError("block factorization failed in " + context +
                           ": Jacobi sweeps exhausted");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= 1e-18 * norm) continue;
        const double app = a[p * n + p], aqq = a[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double sgn = tau >= 0.0 ? 1.0 : -1.0;
        const double t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * n + p], arq = a[r * n + q];
          a[r * n + p] = arp * c - arq * s;
          a[r * n + q] = arp * s + arq * c;
          a[p * n + r] = a[r * n + p];
          a[q * n + r] = a[r * n + q];
        }
        a[p * n + p] = c * c * app - 2.0 * c * s * apq + s * s * aqq;
        a[q * n + q] = s * s * app + 2.0 * c * s * apq + c * c * aqq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (int r = 0; r < n; ++r) {
          const double vrp = evecs[r * n + p], vrq = evecs[r * n + q];
          evecs[r * n + p] = vrp * c - vrq * s;
          evecs[r * n + q] = vrp * s + vrq * c;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) evals[i] = a[i * n + i];
}

bool cholesky(int n, Vec a, Vec& l) {  // a row-major symmetric; l lower
  l.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (s <= 0.0) return false;
        l[i * n + i] = std::sqrt(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  }
  return true;
}

// --- per-block workspace ---

struct Block {
  int n = 0;
  bool diag = false;
  std::vector<int> vars;                 // variable indices with entries here
  std::vector<const SparseSym*> mats;    // parallel to vars
  const SparseSym* f0 = nullptr;
  Vec X, S, W, Sinv, Rd, Rc, dX, dS, tmp1, tmp2;

  int dim() const { return n; }
  int elems() const { return diag ? n : n * n; }
};

void accumulate_sparse(Block& b, const SparseSym& m, double coeff, Vec& out) {
  if (b.diag) {
    for (const SparseEntry& e : m) out[e.row] += coeff * e.value;
    return;
  }
  for (const SparseEntry& e : m) {
    out[e.row * b.n + e.col] += coeff * e.value;
    if (e.row != e.col) out[e.col * b.n + e.row] += coeff * e.value;
  }
}

double sparse_inner(const Block& b, const SparseSym& m, const Vec& dense) {
  double s = 0.0;
  if (b.diag) {
    for (const SparseEntry& e : m) s += e.value * dense[e.row];
    return s;
  }
  for (const SparseEntry& e : m)
    s += e.value * (e.row == e.col ? dense[e.row * b.n + e.col]
                                   : 2.0 * dense[e.row * b.n + e.col]);
  return s;
}

double inner(const Block& b, const Vec& x, const Vec& y) {
  double s = 0.0;
  const int m = b.elems();
  for (int i = 0; i < m; ++i) s += x[i] * y[i];
  return s;
}

// W m W for sparse m, exploiting the rank structure of each entry.
void scale_sparse(const Block& b, const SparseSym& m, const Vec& w, Vec& out) {
  const int n = b.n;
  std::fill(out.begin(), out.end(), 0.0);
  if (b.diag) {
    for (const SparseEntry& e : m) out[e.row] += w[e.row] * w[e.row] * e.value;
    return;
  }
  for (const SparseEntry& e : m) {
    const double* wr = w.data() + e.row * n;
    const double* wc = w.data() + e.col * n;
    if (e.row == e.col) {
      for (int i = 0; i < n; ++i) {
        const double s = e.value * wr[i];
        if (s == 0.0) continue;
        for (int j = 0; j < n; ++j) out[i * n + j] += s * wr[j];
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const double s1 = e.value * wr[i];
        const double s2 = e.value * wc[i];
        const double* o = out.data() + i * n;
        if (s1 != 0.0 || s2 != 0.0)
          for (int j = 0; j < n; ++j) out[i * n + j] = o[j] + s1 * wc[j] + s2 * wr[j];
      }
    }
  }
}

// Largest step alpha <= 1 with M + alpha D >= 0, damped by `fraction`.
double max_step(Block& b, const Vec& m, const Vec& d, double fraction,
                const std::string& context) {
  if (b.diag) {
    double alpha = 1.0;
    for (int i = 0; i < b.n; ++i)
      if (d[i] < 0.0) alpha = std::min(alpha, -fraction * m[i] / d[i]);
    return alpha;
  }
  Vec l;
  bool ok = cholesky(b.n, m, l);
  if (!ok) {  // roundoff-singular iterate: retry with a relative jitter
    double maxdiag = 1e-300;
    for (int i = 0; i < b.n; ++i) maxdiag = std::max(maxdiag, m[i * b.n + i]);
    Vec mj = m;
    for (int i = 0; i < b.n; ++i) mj[i * b.n + i] += 1e-13 * maxdiag;
    ok = cholesky(b.n, mj, l);
  }
  if (!ok)
    throw NumericalError("block factorization failed in " + context + " (step length)");
  // T = L^{-1} D L^{-T}
  const int n = b.n;
  Vec t(d);
  // forward solves on columns: T <- L^{-1} D
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) {
      double s = t[i * n + col];
      for (int k = 0; k < i; ++k) s -= l[i * n + k] * t[k * n + col];
      t[i * n + col] = s / l[i * n + i];
    }
  }
  // right solves on rows: T <- T L^{-T}
  for (int row = 0; row < n; ++row) {
    for (int i = 0; i < n; ++i) {
      double s = t[row * n + i];
      for (int k = 0; k < i; ++k) s -= t[row * n + k] * l[i * n + k];
      t[row * n + i] = s / l[i * n + i];
    }
  }
  symmetrize(n, t.data());
  Vec evals, evecs;
  sym_eig(n, t, evals, evecs, context + " (step length)");
  const double lam_min = *std::min_element(evals.begin(), evals.end());
  double alpha = (lam_min >= 0.0) ? 1.0 : std::min(1.0, -fraction / lam_min);
  // The eigenvalue estimate degrades with the conditioning of M; verify the
  // candidate step keeps the block inside the cone and back off otherwise.
  Vec probe(n * n), lp;
  for (int attempt = 0; attempt < 30; ++attempt) {
    for (int i = 0; i < n * n; ++i) probe[i] = m[i] + alpha * d[i];
    if (cholesky(n, probe, lp)) break;
    alpha *= 0.7;
  }
  return alpha;
}

// Cholesky with escalating relative jitter on breakdown; the iterates are
// kept inside the cone by the line search, so only roundoff-level rescue is
// expected here.
bool cholesky_jittered(int n, const Vec& a, Vec& l) {
  if (cholesky(n, a, l)) return true;
  double maxdiag = 1e-300;
  for (int i = 0; i < n; ++i) maxdiag = std::max(maxdiag, a[i * n + i]);
  double jitter = 1e-14 * maxdiag;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Vec aj = a;
    for (int i = 0; i < n; ++i) aj[i * n + i] += jitter;
    if (cholesky(n, aj, l)) return true;
    jitter *= 100.0;
    if (jitter > 1e-6 * maxdiag) break;
  }
  return false;
}

}  // namespace

SdpSolution solve(const BlockSdp& problem, const SolveOptions& opts) {
  problem.validate();
  if (problem.total_dim() > opts.max_total_dim)
    throw Error("solve: total block dimension " + std::to_string(problem.total_dim()) +
                " exceeds the configured cap " + std::to_string(opts.max_total_dim));

  const int p = problem.num_vars;
  const int nb = static_cast<int>(problem.blocks.size());
  SdpSolution sol;
  sol.y.assign(p, 0.0);
  if (nb == 0) {
    sol.status = SdpStatus::optimal;
    return sol;
  }
  if (p == 0) {
    // no variables: the problem is feasible iff every -F_0 is PSD
    bool feasible = true;
    for (int b = 0; b < nb && feasible; ++b) {
      const int n = problem.blocks[b].size;
      if (problem.blocks[b].diagonal) {
        for (const SparseEntry& e : problem.F[b][0])
          if (e.value > 1e-12) feasible = false;  // -F_0 entry < 0
        continue;
      }
      Vec dense(n * n, 0.0);
      double scale = 1e-300;
      for (const SparseEntry& e : problem.F[b][0]) {
        dense[e.row * n + e.col] -= e.value;
        if (e.row != e.col) dense[e.col * n + e.row] -= e.value;
        scale = std::max(scale, std::abs(e.value));
      }
      for (int i = 0; i < n; ++i) dense[i * n + i] += 1e-12 * scale;
      Vec l;
      if (!cholesky(n, dense, l)) feasible = false;
    }
    sol.status = feasible ? SdpStatus::optimal : SdpStatus::infeasible_certificate;
    return sol;
  }

  // workspace
  std::vector<Block> blocks(nb);
  double data_norm = 0.0;
  for (int b = 0; b < nb; ++b) {
    Block& blk = blocks[b];
    blk.n = problem.blocks[b].size;
    blk.diag = problem.blocks[b].diagonal;
    blk.f0 = &problem.F[b][0];
    for (int i = 1; i <= p; ++i)
      if (!problem.F[b][i].empty()) {
        blk.vars.push_back(i - 1);
        blk.mats.push_back(&problem.F[b][i]);
      }
    const int m = blk.elems();
    blk.X.assign(m, 0.0);
    blk.S.assign(m, 0.0);
    blk.Rd.assign(m, 0.0);
    blk.Rc.assign(m, 0.0);
    blk.dX.assign(m, 0.0);
    blk.dS.assign(m, 0.0);
    blk.W.assign(blk.diag ? blk.n : blk.n * blk.n, 0.0);
    blk.Sinv.assign(blk.diag ? blk.n : blk.n * blk.n, 0.0);
    blk.tmp1.assign(blk.n * blk.n, 0.0);
    blk.tmp2.assign(blk.n * blk.n, 0.0);
    for (const SparseSym* mats : blk.mats)
      for (const SparseEntry& e : *mats) data_norm = std::max(data_norm, std::abs(e.value));
    for (const SparseEntry& e : *blk.f0) data_norm = std::max(data_norm, std::abs(e.value));
  }
  double bnorm = 0.0;
  for (double c : problem.cost) bnorm = std::max(bnorm, std::abs(c));

  const double init = std::max({10.0, 2.0 * data_norm, 2.0 * bnorm});
  const int total_dim = problem.total_dim();
  for (Block& blk : blocks) {
    if (blk.diag) {
      std::fill(blk.X.begin(), blk.X.end(), init);
      std::fill(blk.S.begin(), blk.S.end(), init);
    } else {
      for (int i = 0; i < blk.n; ++i) {
        blk.X[i * blk.n + i] = init;
        blk.S[i * blk.n + i] = init;
      }
    }
  }

  std::vector<double> rp(p), q(p), dy(p), dy_aff(p);
  std::vector<double> schur(static_cast<size_t>(p) * p);
  std::vector<double> chol(static_cast<size_t>(p) * p);
  std::vector<Vec> wfw;  // per-block scratch for W F_i W of the active variable

  double f0norm = 1.0;
  for (int b = 0; b < nb; ++b) {
    Vec tmp(blocks[b].elems(), 0.0);
    accumulate_sparse(blocks[b], *blocks[b].f0, 1.0, tmp);
    double s = 0.0;
    for (double v : tmp) s += v * v;
    f0norm = std::max(f0norm, std::sqrt(s));
  }

  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    // residuals
    std::fill(rp.begin(), rp.end(), 0.0);
    double pobj = 0.0;
    for (int b = 0; b < nb; ++b) {
      Block& blk = blocks[b];
      for (size_t vi = 0; vi < blk.vars.size(); ++vi)
        rp[blk.vars[vi]] += sparse_inner(blk, *blk.mats[vi], blk.X);
      pobj += sparse_inner(blk, *blk.f0, blk.X);
    }
    double rp_norm = 0.0;
    for (int i = 0; i < p; ++i) {
      rp[i] = problem.cost[i] - rp[i];
      rp_norm = std::max(rp_norm, std::abs(rp[i]));
    }

    double rd_norm = 0.0, gap = 0.0;
    for (int b = 0; b < nb; ++b) {
      Block& blk = blocks[b];
      std::fill(blk.Rd.begin(), blk.Rd.end(), 0.0);
      for (size_t vi = 0; vi < blk.vars.size(); ++vi)
        accumulate_sparse(blk, *blk.mats[vi], sol.y[blk.vars[vi]], blk.Rd);
      accumulate_sparse(blk, *blk.f0, -1.0, blk.Rd);
      for (int i = 0; i < blk.elems(); ++i) blk.Rd[i] -= blk.S[i];
      double s = 0.0;
      for (double v : blk.Rd) s += v * v;
      rd_norm = std::max(rd_norm, std::sqrt(s));
      gap += inner(blk, blk.X, blk.S);
    }
    const double mu = gap / total_dim;
    const double dobj = [&] {
      double s = 0.0;
      for (int i = 0; i < p; ++i) s += problem.cost[i] * sol.y[i];
      return s;
    }();

    sol.primal_inf = rp_norm / (1.0 + bnorm);
    sol.dual_inf = rd_norm / (1.0 + f0norm);
    sol.duality_gap = std::abs(dobj - pobj);
    sol.objective = dobj;
    sol.iterations = iter;
    sol.trace.push_back({mu, sol.primal_inf, sol.dual_inf, gap});

    if (sol.primal_inf <= opts.tol && sol.dual_inf <= opts.tol &&
        sol.duality_gap <= opts.gap_tol * (1.0 + std::abs(dobj))) {
      sol.status = SdpStatus::optimal;
      break;
    }
    // crude divergence heuristic standing in for an infeasibility certificate
    if (pobj > 1e10 * (1.0 + std::abs(dobj)) && sol.primal_inf > 1e3 * opts.tol) {
      sol.status = SdpStatus::infeasible_certificate;
      break;
    }

    // NT scaling point per block: W = S^{-1/2} (S^{1/2} X S^{1/2})^{1/2} S^{-1/2}
    for (int b = 0; b < nb; ++b) {
      Block& blk = blocks[b];
      const std::string ctx = "block " + std::to_string(b);
      if (blk.diag) {
        for (int i = 0; i < blk.n; ++i) {
          if (blk.S[i] <= 0.0 || blk.X[i] <= 0.0)
            throw NumericalError("block factorization failed in " + ctx);
          blk.W[i] = std::sqrt(blk.X[i] / blk.S[i]);
          blk.Sinv[i] = 1.0 / blk.S[i];
        }
        continue;
      }
      // Computed through the Cholesky factors: with M = Ls' Lx = U Sigma V',
      // W = (Lx V) Sigma^{-1} (Lx V)' satisfies W S W = X, stays symmetric
      // positive definite by construction, and avoids the cancellation that
      // plagues forming S^{1/2} X S^{1/2} directly near complementarity.
      const int n = blk.n;
      Vec lx, ls;
      if (!cholesky_jittered(n, blk.X, lx))
        throw NumericalError("block factorization failed in " + ctx + " (X not PD)");
      if (!cholesky_jittered(n, blk.S, ls))
        throw NumericalError("block factorization failed in " + ctx + " (S not PD)");
      // M = Ls' Lx, then the Gram matrix G = M' M (PSD by construction)
      Vec lst(n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lst[i * n + j] = ls[j * n + i];
      Vec mprod(n * n);
      mat_mul(n, lst.data(), lx.data(), mprod.data());
      Vec mt(n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mt[i * n + j] = mprod[j * n + i];
      Vec gram(n * n);
      mat_mul(n, mt.data(), mprod.data(), gram.data());
      symmetrize(n, gram.data());
      Vec gvals, gvecs;
      sym_eig(n, gram, gvals, gvecs, ctx);
      double gmax = 1e-300;
      for (double v : gvals) gmax = std::max(gmax, v);
      // columns of Lx V, scaled by sigma^{-1/2} so the outer-product sum
      // below yields W = (Lx V) Sigma^{-1} (Lx V)'
      Vec lxv(n * n);
      mat_mul(n, lx.data(), gvecs.data(), lxv.data());
      for (int j = 0; j < n; ++j) {
        const double sroot = std::pow(std::max(gvals[j], 1e-30 * gmax), 0.25);
        for (int i = 0; i < n; ++i) lxv[i * n + j] /= sroot;
      }
      std::fill(blk.W.begin(), blk.W.end(), 0.0);
      for (int i = 0; i < n; ++i)
        for (int kcol = 0; kcol < n; ++kcol) {
          const double v = lxv[i * n + kcol];
          if (v == 0.0) continue;
          for (int j = 0; j < n; ++j) blk.W[i * n + j] += v * lxv[j * n + kcol];
        }
      symmetrize(n, blk.W.data());
      // S^{-1} from the factor: solve Ls Ls' Z = I
      std::fill(blk.Sinv.begin(), blk.Sinv.end(), 0.0);
      for (int col = 0; col < n; ++col) {
        Vec e(n, 0.0);
        e[col] = 1.0;
        for (int i = 0; i < n; ++i) {
          double s = e[i];
          for (int kk = 0; kk < i; ++kk) s -= ls[i * n + kk] * e[kk];
          e[i] = s / ls[i * n + i];
        }
        for (int i = n - 1; i >= 0; --i) {
          double s = e[i];
          for (int kk = i + 1; kk < n; ++kk) s -= ls[kk * n + i] * e[kk];
          e[i] = s / ls[i * n + i];
        }
        for (int i = 0; i < n; ++i) blk.Sinv[i * n + col] = e[i];
      }
      symmetrize(n, blk.Sinv.data());
    }

    // Schur complement M_ij = sum_b Tr(F_i W F_j W)
    std::fill(schur.begin(), schur.end(), 0.0);
    for (int b = 0; b < nb; ++b) {
      Block& blk = blocks[b];
      Vec g(blk.elems());
      for (size_t vi = 0; vi < blk.vars.size(); ++vi) {
        scale_sparse(blk, *blk.mats[vi], blk.W, g);
        const int i = blk.vars[vi];
        for (size_t vj = vi; vj < blk.vars.size(); ++vj) {
          const int j = blk.vars[vj];
          const double v = sparse_inner(blk, *blk.mats[vj], g);
          schur[static_cast<size_t>(i) * p + j] += v;
          if (i != j) schur[static_cast<size_t>(j) * p + i] += v;
        }
      }
    }
    // factor once per iteration (with escalating jitter on breakdown)
    {
      double jitter = 0.0;
      double maxdiag = 1e-300;
      for (int i = 0; i < p; ++i)
        maxdiag = std::max(maxdiag, schur[static_cast<size_t>(i) * p + i]);
      bool ok = false;
      for (int attempt = 0; attempt < 60 && !ok; ++attempt) {
        Vec m(schur.begin(), schur.end());
        if (jitter > 0.0)
          for (int i = 0; i < p; ++i) m[static_cast<size_t>(i) * p + i] += jitter;
        ok = cholesky(p, m, chol);
        if (!ok) jitter = (jitter == 0.0) ? 1e-14 * maxdiag : jitter * 10.0;
      }
      if (!ok) throw NumericalError("Schur complement factorization failed");
    }
    auto solve_schur = [&](const std::vector<double>& rhs, std::vector<double>& out) {
      out = rhs;
      for (int i = 0; i < p; ++i) {
        double s = out[i];
        for (int k = 0; k < i; ++k) s -= chol[static_cast<size_t>(i) * p + k] * out[k];
        out[i] = s / chol[static_cast<size_t>(i) * p + i];
      }
      for (int i = p - 1; i >= 0; --i) {
        double s = out[i];
        for (int k = i + 1; k < p; ++k) s -= chol[static_cast<size_t>(k) * p + i] * out[k];
        out[i] = s / chol[static_cast<size_t>(i) * p + i];
      }
    };

    // rhs and direction for a given Rc (returns dy, dS, dX in the blocks)
    auto compute_direction = [&](std::vector<double>& dy_out) {
      for (int i = 0; i < p; ++i) q[i] = -rp[i];
      for (int b = 0; b < nb; ++b) {
        Block& blk = blocks[b];
        // H = W Rd W
        Vec h(blk.elems());
        if (blk.diag) {
          for (int i = 0; i < blk.n; ++i) h[i] = blk.W[i] * blk.W[i] * blk.Rd[i];
        } else {
          mat_mul(blk.n, blk.W.data(), blk.Rd.data(), blk.tmp1.data());
          mat_mul(blk.n, blk.tmp1.data(), blk.W.data(), h.data());
          symmetrize(blk.n, h.data());
        }
        for (size_t vi = 0; vi < blk.vars.size(); ++vi) {
          const int i = blk.vars[vi];
          q[i] += sparse_inner(blk, *blk.mats[vi], blk.Rc) - sparse_inner(blk, *blk.mats[vi], h);
        }
      }
      solve_schur(q, dy_out);
      for (int b = 0; b < nb; ++b) {
        Block& blk = blocks[b];
        std::fill(blk.dS.begin(), blk.dS.end(), 0.0);
        for (size_t vi = 0; vi < blk.vars.size(); ++vi)
          accumulate_sparse(blk, *blk.mats[vi], dy_out[blk.vars[vi]], blk.dS);
        for (int i = 0; i < blk.elems(); ++i) blk.dS[i] += blk.Rd[i];
        if (blk.diag) {
          for (int i = 0; i < blk.n; ++i)
            blk.dX[i] = blk.Rc[i] - blk.W[i] * blk.W[i] * blk.dS[i];
        } else {
          mat_mul(blk.n, blk.W.data(), blk.dS.data(), blk.tmp1.data());
          mat_mul(blk.n, blk.tmp1.data(), blk.W.data(), blk.tmp2.data());
          for (int i = 0; i < blk.elems(); ++i) blk.dX[i] = blk.Rc[i] - blk.tmp2[i];
          symmetrize(blk.n, blk.dX.data());
        }
      }
    };

    // predictor (affine scaling): Rc = -X
    for (Block& blk : blocks)
      for (int i = 0; i < blk.elems(); ++i) blk.Rc[i] = -blk.X[i];
    compute_direction(dy_aff);

    double ap = 1.0, ad = 1.0;
    for (int b = 0; b < nb; ++b) {
      ap = std::min(ap, max_step(blocks[b], blocks[b].X, blocks[b].dX, opts.step_fraction,
                                 "block " + std::to_string(b)));
      ad = std::min(ad, max_step(blocks[b], blocks[b].S, blocks[b].dS, opts.step_fraction,
                                 "block " + std::to_string(b)));
    }
    double gap_aff = 0.0;
    for (Block& blk : blocks) {
      const int m = blk.elems();
      double s = 0.0;
      if (blk.diag) {
        for (int i = 0; i < m; ++i) s += (blk.X[i] + ap * blk.dX[i]) * (blk.S[i] + ad * blk.dS[i]);
      } else {
        for (int i = 0; i < m; ++i) s += (blk.X[i] + ap * blk.dX[i]) * (blk.S[i] + ad * blk.dS[i]);
      }
      gap_aff += s;
    }
    const double mu_aff = gap_aff / total_dim;
    const double ap_aff = ap, ad_aff = ad;
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
    sigma = std::min(1.0, std::max(sigma, 1e-6));

    // corrector: Rc = sigma mu S^{-1} - X - sym(dX_aff dS_aff S^{-1}); the
    // second-order term is dropped when it shortens the step badly
    auto set_corrector = [&](bool second_order) {
      for (int b = 0; b < nb; ++b) {
        Block& blk = blocks[b];
        if (blk.diag) {
          for (int i = 0; i < blk.n; ++i) {
            const double so = second_order ? blk.dX[i] * blk.dS[i] * blk.Sinv[i] : 0.0;
            blk.Rc[i] = sigma * mu * blk.Sinv[i] - blk.X[i] - so;
          }
          continue;
        }
        const int n = blk.n;
        if (second_order) {
          mat_mul(n, blk.dX.data(), blk.dS.data(), blk.tmp1.data());
          mat_mul(n, blk.tmp1.data(), blk.Sinv.data(), blk.tmp2.data());
        } else {
          std::fill(blk.tmp2.begin(), blk.tmp2.end(), 0.0);
        }
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const double so = 0.5 * (blk.tmp2[i * n + j] + blk.tmp2[j * n + i]);
            blk.Rc[i * n + j] = sigma * mu * blk.Sinv[i * n + j] - blk.X[i * n + j] - so;
          }
      }
    };
    auto steps_for_direction = [&] {
      ap = 1.0;
      ad = 1.0;
      for (int b = 0; b < nb; ++b) {
        ap = std::min(ap, max_step(blocks[b], blocks[b].X, blocks[b].dX, opts.step_fraction,
                                   "block " + std::to_string(b)));
        ad = std::min(ad, max_step(blocks[b], blocks[b].S, blocks[b].dS, opts.step_fraction,
                                   "block " + std::to_string(b)));
      }
    };

    set_corrector(true);
    compute_direction(dy);
    steps_for_direction();
    if (std::min(ap, ad) < 0.2 * std::min(ap_aff, ad_aff)) {
      set_corrector(false);
      compute_direction(dy);
      steps_for_direction();
    }

    for (int i = 0; i < p; ++i) sol.y[i] += ad * dy[i];
    for (Block& blk : blocks) {
      for (int i = 0; i < blk.elems(); ++i) {
        blk.X[i] += ap * blk.dX[i];
        blk.S[i] += ad * blk.dS[i];
      }
    }

    if (ap < 1e-10 && ad < 1e-10) {
      sol.status = SdpStatus::max_iterations;  // stalled
      ++iter;
      break;
    }
  }

  if (sol.status != SdpStatus::optimal && sol.status != SdpStatus::infeasible_certificate)
    sol.status = SdpStatus::max_iterations;
  sol.iterations = iter;
  sol.dual_blocks.clear();
  for (Block& blk : blocks) {
    if (blk.diag) {
      Vec full(blk.n * blk.n, 0.0);
      for (int i = 0; i < blk.n; ++i) full[i * blk.n + i] = blk.X[i];
      sol.dual_blocks.push_back(std::move(full));
    } else {
      sol.dual_blocks.push_back(blk.X);
    }
  }
  return sol;
}

FeasibilityResult solve_feasibility(const BlockSdp& problem, const SolveOptions& opts,
                                    double threshold) {
  BlockSdp ph = problem;
  const int s_var = ph.num_vars;
  ph.num_vars += 1;
  ph.cost.assign(ph.num_vars, 0.0);
  ph.cost[s_var] = 1.0;
  for (size_t b = 0; b < ph.blocks.size(); ++b) {
    SparseSym ident;
    for (int d = 0; d < ph.blocks[b].size; ++d) ident.push_back({d, d, 1.0});
    ph.F[b].push_back(std::move(ident));
  }
  // keep the phase-1 objective bounded: s >= -1
  ph.blocks.push_back({1, true});
  ph.F.push_back(std::vector<SparseSym>(ph.num_vars + 1));
  ph.F.back()[0].push_back({0, 0, -1.0});
  ph.F.back()[s_var + 1].push_back({0, 0, 1.0});

  FeasibilityResult res;
  res.solution = solve(ph, opts);
  res.margin = res.solution.y.empty() ? 0.0 : res.solution.y[s_var];
  res.feasible = res.solution.status == SdpStatus::optimal && res.margin <= threshold;
  return res;
}

}  // namespace oprel
