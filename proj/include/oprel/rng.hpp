#pragma once

#include <cmath>
#include <cstdint>

#include "oprel/hermitian.hpp"

namespace oprel {

// xorshift64* generator. Fully specified so that seeded instances are
// reproducible across platforms: the state update is
//   s ^= s >> 12; s ^= s << 25; s ^= s >> 27;
// and the output is s * 2685821657736338717 (mod 2^64). Uniform doubles take
// the top 53 bits; normals come from Box-Muller on uniform pairs.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  uint64_t next_u64() {
    uint64_t s = state_;
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    state_ = s;
    return s * 2685821657736338717ULL;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  HermitianMatrix hermitian(int n, bool complex_entries = true) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double re = gaussian();
        double im = complex_entries ? gaussian() : 0.0;
        m(i, j) = cplx(re, im);
      }
    return HermitianMatrix(m);  // symmetrized on build
  }

  // Gaussian square plus a diagonal shift, so spectra stay comfortably PD.
  HermitianMatrix positive_definite(int n, bool complex_entries = true, double shift = 0.5) {
    CMat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double re = gaussian();
        double im = complex_entries ? gaussian() : 0.0;
        g(i, j) = cplx(re, im);
      }
    CMat m = g * g.adjoint();
    for (int i = 0; i < n; ++i) m(i, i) += shift * n;
    return HermitianMatrix(m * cplx(1.0 / n, 0.0));
  }

  HermitianMatrix unit_trace_pd(int n, bool complex_entries = true, double shift = 0.5) {
    HermitianMatrix m = positive_definite(n, complex_entries, shift);
    return (1.0 / m.trace()) * m;
  }

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace oprel
