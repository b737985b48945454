#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "oprel/quadrature.hpp"

using namespace oprel;

namespace {

void check_rule_shape(const QuadratureRule& r) {
  REQUIRE(r.order == static_cast<int>(r.nodes.size()));
  REQUIRE(r.order == static_cast<int>(r.weights.size()));
  for (int j = 0; j < r.order; ++j) {
    CHECK(r.nodes[j] > 0.0);
    CHECK(r.nodes[j] < 1.0);
    CHECK(r.weights[j] > 0.0);
    if (j > 0) CHECK(r.nodes[j] > r.nodes[j - 1]);
  }
}

void check_symmetry(const QuadratureRule& r, double tol) {
  for (int j = 0; j < r.order; ++j) {
    const int k = r.order - 1 - j;
    CHECK(std::abs(r.nodes[j] + r.nodes[k] - 1.0) <= tol);
    CHECK(std::abs(r.weights[j] - r.weights[k]) <= tol);
  }
}

}  // namespace

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("gauss_legendre closed forms") {
  QuadratureRule r1 = gauss_legendre(1);
  CHECK(r1.nodes[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

  QuadratureRule r2 = gauss_legendre(2);
  const double d = 0.5 / std::sqrt(3.0);
  CHECK(r2.nodes[0] == doctest::Approx(0.5 - d).epsilon(1e-13));
  CHECK(r2.nodes[1] == doctest::Approx(0.5 + d).epsilon(1e-13));
  CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(r2.weights[1] == doctest::Approx(0.5).epsilon(1e-13));

  QuadratureRule r5 = gauss_legendre(5);
  CHECK(std::abs(r5.discrete_moment(9) - 0.1) <= 1e-13);
}

TEST_CASE("gauss_legendre exactness and symmetry") {
  for (int m : {1, 2, 3, 4, 5, 6, 7, 8, 16, 32}) {
    QuadratureRule r = gauss_legendre(m);
    check_rule_shape(r);
    CHECK(std::abs(r.weight_sum() - 1.0) <= 1e-13);
    for (int p = 0; p <= 2 * m - 1; ++p)
      CHECK(std::abs(r.discrete_moment(p) - 1.0 / (p + 1)) <= 1e-12);
    check_symmetry(r, 1e-12);
  }
}

TEST_CASE("gauss_arcsine closed forms") {
  QuadratureRule r1 = gauss_arcsine(1);
  CHECK(r1.nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  QuadratureRule r2 = gauss_arcsine(2);
  const double d = 0.5 / std::sqrt(2.0);
  CHECK(r2.nodes[0] == doctest::Approx(0.5 - d).epsilon(1e-14));
  CHECK(r2.nodes[1] == doctest::Approx(0.5 + d).epsilon(1e-14));

  QuadratureRule r3 = gauss_arcsine(3);
  CHECK(std::abs(r3.discrete_moment(1) - 0.5) <= 1e-13);
}

TEST_CASE("gauss_arcsine exactness") {
  for (int m : {1, 2, 3, 4, 6, 8}) {
    QuadratureRule r = gauss_arcsine(m);
    check_rule_shape(r);
    CHECK(std::abs(r.weight_sum() - 1.0) <= 1e-13);
    for (int p = 0; p <= 2 * m - 1; ++p)
      CHECK(std::abs(r.discrete_moment(p) - oracles::arcsine_moment(p)) <= 1e-12);
    check_symmetry(r, 1e-12);
  }
}

TEST_CASE("gauss_from_density reproduces Lebesgue") {
  QuadratureRule r = gauss_from_density([](double) { return 1.0; }, 3);
  QuadratureRule gl = gauss_legendre(3);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(r.nodes[j] - gl.nodes[j]) <= 1e-10);
    CHECK(std::abs(r.weights[j] - gl.weights[j]) <= 1e-10);
  }
}

TEST_CASE("gauss_from_density reproduces arcsine") {
  QuadratureRule r = gauss_from_density(arcsine_density, 2);
  QuadratureRule cf = gauss_arcsine(2);
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(r.nodes[j] - cf.nodes[j]) <= 1e-8);
    CHECK(std::abs(r.weights[j] - cf.weights[j]) <= 1e-8);
  }
}

TEST_CASE("gauss_from_density rejects nonpositive densities") {
  CHECK_THROWS_AS(gauss_from_density([](double t) { return t - 0.5; }, 2), DomainError);
}

TEST_CASE("gauss_from_density on the log-mean density") {
  // The endpoint tails of this density decay like 1/(t log^2 t): the generic
  // graded grid undercounts them (the rule renormalizes and records the
  // deviation), and double rounding near t = 1 limits the attainable
  // symmetry. The substitution-based rule is the accurate construction; the
  // generic path is checked at its realistic precision.
  QuadratureRule r = gauss_from_density(log_mean_measure_density, 1);
  CHECK(std::abs(r.nodes[0] - 0.5) <= 1e-2);
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r.mass_deviation > 1e-8);  // genuinely truncated tails, recorded

  QuadratureRule exact = log_mean_measure_rule(1);
  CHECK(exact.nodes[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(exact.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.mass_deviation <= 1e-8);
}

TEST_CASE("log-mean measure rule") {
  QuadratureRule r1 = log_mean_measure_rule(1);
  CHECK(r1.nodes[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r1.mass_deviation <= 1e-8);

  // total mass of the density itself, via the defining integral
  const double mass = oracles::integrate([](double u) { return 1.0 / (M_PI * M_PI + u * u); },
                                         -1e6, 1e6, 1e-9) ;
  CHECK(std::abs(mass - 1.0) <= 1e-5);  // heavy tails; coarse sanity only

  for (int m : {2, 3, 4}) {
    QuadratureRule r = log_mean_measure_rule(m);
    check_rule_shape(r);
    CHECK(std::abs(r.weight_sum() - 1.0) <= 1e-13);
    check_symmetry(r, 1e-9);
  }

  // moments against an oracle in the variable u = log((1-t)/t), where the
  // measure is du/(pi^2+u^2); the left tail (t ~ 1) is added analytically.
  QuadratureRule r3 = log_mean_measure_rule(3);
  const double cutoff = 40.0;
  for (int p = 1; p <= 5; ++p) {
    const double body = oracles::integrate(
        [p](double u) {
          const double t = 1.0 / (1.0 + std::exp(u));
          return std::pow(t, p) / (M_PI * M_PI + u * u);
        },
        -cutoff, cutoff, 1e-13);
    const double left_tail = 0.5 - std::atan(cutoff / M_PI) / M_PI;
    CHECK(std::abs(r3.discrete_moment(p) - (body + left_tail)) <= 1e-9);
  }
}

TEST_CASE("gauss_from_moments matches Legendre") {
  std::vector<double> mom(8);
  for (int p = 0; p < 8; ++p) mom[p] = 1.0 / (p + 1);
  QuadratureRule r = gauss_from_moments(mom, 4, "from-moments");
  QuadratureRule gl = gauss_legendre(4);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(r.nodes[j] - gl.nodes[j]) <= 1e-9);
    CHECK(std::abs(r.weights[j] - gl.weights[j]) <= 1e-9);
  }
}

TEST_CASE("gauss_from_moments detects recurrence breakdown") {
  // moments of a single atom at 1/2: no 2-point rule exists
  std::vector<double> atom(4);
  for (int p = 0; p < 4; ++p) atom[p] = std::pow(0.5, p);
  CHECK_THROWS_AS(gauss_from_moments(atom, 2, "atomic"), NumericalError);
}

TEST_SUITE_END();
